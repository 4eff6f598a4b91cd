#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hciz/errors.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/matrix.hpp"

namespace hciz {

using Json = nlohmann::json;

// Complex matrix schema: {"n": n, "re": [n*n row-major], "im": [...]}.
inline Json matrix_to_json(const HermitianMatrix& m) {
  const int n = m.dim();
  std::vector<double> re, im;
  re.reserve(n * n);
  im.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      re.push_back(m.mat()(i, j).real());
      im.push_back(m.mat()(i, j).imag());
    }
  }
  return Json{{"n", n}, {"re", re}, {"im", im}};
}

inline HermitianMatrix matrix_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("re") || !j.contains("im")) {
    throw DomainError("matrix_from_json: missing n/re/im");
  }
  const int n = j.at("n").get<int>();
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (static_cast<int>(re.size()) != n * n ||
      static_cast<int>(im.size()) != n * n) {
    throw DomainError("matrix_from_json: wrong entry count");
  }
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < n; ++jj) {
      m(i, jj) = std::complex<double>(re[i * n + jj], im[i * n + jj]);
    }
  }
  return HermitianMatrix(std::move(m));
}

// Triangle schema: {"n": n, "rows": [[row1], [row2], ...]}, row j of
// length j.
inline Json triangle_to_json(const RayleighTriangle& p) {
  Json rows = Json::array();
  for (int j = 1; j <= p.size(); ++j) {
    Json row = Json::array();
    for (double v : p.row(j)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return Json{{"n", p.size()}, {"rows", rows}};
}

inline RayleighTriangle triangle_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("rows")) {
    throw DomainError("triangle_from_json: missing n/rows");
  }
  const int n = j.at("n").get<int>();
  const Json& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != n) {
    throw DomainError("triangle_from_json: wrong row count");
  }
  RayleighTriangle p(n);
  for (int r = 1; r <= n; ++r) {
    const Json& row = rows[r - 1];
    if (static_cast<int>(row.size()) != r) {
      throw DomainError("triangle_from_json: row length mismatch");
    }
    for (int i = 1; i <= r; ++i) p.at(i, r) = row[i - 1].get<double>();
  }
  return p;
}

namespace detail {

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// CSV export of matrices: columns re_i_j then im_i_j, 1-based, 17
// significant digits so values round-trip bit-exactly.
inline void matrices_to_csv(const std::vector<HermitianMatrix>& ms,
                            std::ostream& os) {
  if (ms.empty()) return;
  const int n = ms.front().dim();
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      os << "re_" << i << "_" << j << ",";
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      os << "im_" << i << "_" << j << (i == n && j == n ? "" : ",");
    }
  }
  os << "\n";
  for (const auto& m : ms) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        os << detail::format_g17(m.mat()(i, j).real()) << ",";
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        os << detail::format_g17(m.mat()(i, j).imag())
           << (i == n - 1 && j == n - 1 ? "" : ",");
      }
    }
    os << "\n";
  }
}

inline void triangles_to_csv(const std::vector<RayleighTriangle>& ps,
                             std::ostream& os) {
  if (ps.empty()) return;
  const int n = ps.front().size();
  bool first = true;
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= j; ++i) {
      if (!first) os << ",";
      os << "r_" << i << "_" << j;
      first = false;
    }
  }
  os << "\n";
  for (const auto& p : ps) {
    first = true;
    for (int j = 1; j <= n; ++j) {
      for (int i = 1; i <= j; ++i) {
        if (!first) os << ",";
        os << detail::format_g17(p.at(i, j));
        first = false;
      }
    }
    os << "\n";
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw DomainError("parse error in " + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write file: " + path);
  out << body;
}

}  // namespace hciz
