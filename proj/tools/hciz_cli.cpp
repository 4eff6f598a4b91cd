// Command-line front end: sampling subcommands, the partition-function
// oracle, and the statistical validation suites.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hciz/hciz.hpp"
#include "hciz/validate.hpp"

namespace {

using hciz::Json;

// Everything one invocation needs; filled from flags, then from the optional
// JSON config file for flags that were not passed. A fixed seed fully
// determines the output artifacts.
struct RunSpec {
  std::string lambda_csv;
  std::string y_csv;
  std::string y_file;
  std::string a_file;
  std::string p_file;
  int k = 1;
  double epsilon = 1.0;
  std::string mode = "tv";
  double xi = 0.1;
  long num = 1;
  std::uint64_t seed = 0;
  long burn_in = -1;
  long thinning = -1;
  int chains = 2;
  double grid_res = -1.0;
  std::string out;
  std::string format = "json";
  std::string suite;
  std::string config_file;
};

Eigen::VectorXd parse_csv_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw hciz::DomainError("cannot parse number '" + item + "'");
    }
  }
  if (vals.empty()) throw hciz::DomainError("empty vector argument");
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

// Apply config-file values to options the user did not pass on the command
// line. Keys are the long option names without the leading dashes.
void merge_config(const CLI::App& cmd, RunSpec& spec) {
  if (spec.config_file.empty()) return;
  Json cfg = hciz::load_json_file(spec.config_file);
  auto absent = [&](const std::string& flag) {
    const CLI::Option* opt = cmd.get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() == 0 && cfg.contains(flag);
  };
  if (absent("lambda")) spec.lambda_csv = cfg["lambda"].get<std::string>();
  if (absent("y")) spec.y_csv = cfg["y"].get<std::string>();
  if (absent("Y-file")) spec.y_file = cfg["Y-file"].get<std::string>();
  if (absent("A-file")) spec.a_file = cfg["A-file"].get<std::string>();
  if (absent("P-file")) spec.p_file = cfg["P-file"].get<std::string>();
  if (absent("k")) spec.k = cfg["k"].get<int>();
  if (absent("epsilon")) spec.epsilon = cfg["epsilon"].get<double>();
  if (absent("mode")) spec.mode = cfg["mode"].get<std::string>();
  if (absent("xi")) spec.xi = cfg["xi"].get<double>();
  if (absent("num")) spec.num = cfg["num"].get<long>();
  if (absent("seed")) spec.seed = cfg["seed"].get<std::uint64_t>();
  if (absent("burn-in")) spec.burn_in = cfg["burn-in"].get<long>();
  if (absent("thin")) spec.thinning = cfg["thin"].get<long>();
  if (absent("chains")) spec.chains = cfg["chains"].get<int>();
  if (absent("grid-res")) spec.grid_res = cfg["grid-res"].get<double>();
  if (absent("out")) spec.out = cfg["out"].get<std::string>();
  if (absent("format")) spec.format = cfg["format"].get<std::string>();
}

hciz::SamplerMode parse_mode(const std::string& mode) {
  if (mode == "tv") return hciz::SamplerMode::tv;
  if (mode == "inf") return hciz::SamplerMode::inf;
  throw hciz::DomainError("mode must be tv or inf");
}

// Resolve the sampler configuration: defaults derived from the problem,
// overridden by any explicit flags.
hciz::SamplerConfig resolve_sampler(const RunSpec& spec,
                                    const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& y) {
  hciz::GTPolytope poly = hciz::build_polytope(lambda);
  hciz::ExponentSpec exponent = hciz::reduce_exponent(y, poly);
  hciz::SamplerConfig cfg =
      parse_mode(spec.mode) == hciz::SamplerMode::tv
          ? hciz::make_tv_config(poly, spec.xi, spec.seed)
          : hciz::make_inf_config(poly, exponent, spec.xi, spec.seed);
  if (spec.burn_in >= 0) cfg.burn_in = spec.burn_in;
  if (spec.thinning >= 0) cfg.thinning = spec.thinning;
  if (spec.grid_res > 0.0) cfg.grid_resolution = spec.grid_res;
  cfg.chains = spec.chains;
  cfg.validate();
  return cfg;
}

// y may come from --y (diagonal, sorted) or --Y-file (Hermitian).
struct ExponentInput {
  Eigen::VectorXd y_sorted;
  std::optional<hciz::HermitianMatrix> y_matrix;
};

ExponentInput resolve_y(const RunSpec& spec, int n) {
  if (!spec.y_file.empty()) {
    hciz::HermitianMatrix y =
        hciz::matrix_from_json(hciz::load_json_file(spec.y_file));
    if (y.dim() != n) throw hciz::DomainError("Y dimension mismatch");
    auto sd = hciz::hermitian_eigendecompose(y);
    return ExponentInput{sd.eigenvalues, std::move(y)};
  }
  if (spec.y_csv.empty()) {
    return ExponentInput{Eigen::VectorXd::Zero(n), std::nullopt};
  }
  Eigen::VectorXd y = parse_csv_vector(spec.y_csv);
  if (y.size() != n) throw hciz::DomainError("y dimension mismatch");
  return ExponentInput{y, std::nullopt};
}

void write_artifact(const RunSpec& spec, const Json& body,
                    const std::function<void(std::ostream&)>& csv_writer) {
  if (spec.format == "csv") {
    if (spec.out.empty()) {
      csv_writer(std::cout);
    } else {
      std::ofstream os(spec.out, std::ios::binary);
      if (!os) throw hciz::DomainError("cannot write " + spec.out);
      csv_writer(os);
    }
    return;
  }
  std::string text = body.dump(2) + "\n";
  if (spec.out.empty()) {
    std::cout << text;
  } else {
    hciz::write_text_file(spec.out, text);
  }
}

Json matrices_payload(const RunSpec& spec, const std::string& kind,
                      const std::vector<hciz::HermitianMatrix>& samples) {
  Json js = Json::array();
  for (const auto& m : samples) js.push_back(hciz::matrix_to_json(m));
  return Json{{"kind", kind},
              {"count", samples.size()},
              {"seed", spec.seed},
              {"samples", js}};
}

int cmd_sample_orbit(const RunSpec& spec, bool triangles_only) {
  Eigen::VectorXd lambda = parse_csv_vector(spec.lambda_csv);
  ExponentInput y = resolve_y(spec, static_cast<int>(lambda.size()));
  hciz::SamplerConfig cfg = resolve_sampler(spec, lambda, y.y_sorted);
  hciz::SamplerMode mode = parse_mode(spec.mode);

  if (triangles_only) {
    hciz::OrbitProblem prob(lambda, y.y_sorted, mode, spec.xi);
    auto samples = hciz::sample_triangle_batch(prob, cfg, spec.num);
    Json js = Json::array();
    for (const auto& p : samples) js.push_back(hciz::triangle_to_json(p));
    Json body{{"kind", "triangles"},
              {"count", samples.size()},
              {"seed", spec.seed},
              {"lambda", std::vector<double>(lambda.data(),
                                             lambda.data() + lambda.size())},
              {"samples", js}};
    write_artifact(spec, body, [&](std::ostream& os) {
      hciz::triangles_to_csv(samples, os);
    });
    return 0;
  }

  std::vector<hciz::HermitianMatrix> samples;
  if (y.y_matrix) {
    hciz::OrbitProblem prob(lambda, *y.y_matrix, mode, spec.xi);
    samples = hciz::sample_orbit_batch(prob, cfg, spec.num);
  } else {
    hciz::OrbitProblem prob(lambda, y.y_sorted, mode, spec.xi);
    samples = hciz::sample_orbit_batch(prob, cfg, spec.num);
  }
  Json body = matrices_payload(spec, "matrices", samples);
  body["lambda"] =
      std::vector<double>(lambda.data(), lambda.data() + lambda.size());
  write_artifact(spec, body, [&](std::ostream& os) {
    hciz::matrices_to_csv(samples, os);
  });
  return 0;
}

int cmd_sample_fiber(const RunSpec& spec) {
  hciz::RayleighTriangle p =
      hciz::triangle_from_json(hciz::load_json_file(spec.p_file));
  std::vector<hciz::HermitianMatrix> samples;
  samples.reserve(spec.num);
  hciz::Rng rng(spec.seed);
  for (long i = 0; i < spec.num; ++i) {
    samples.push_back(hciz::sample_fiber(p, rng));
  }
  Json body = matrices_payload(spec, "matrices", samples);
  write_artifact(spec, body, [&](std::ostream& os) {
    hciz::matrices_to_csv(samples, os);
  });
  return 0;
}

int cmd_dp_lowrank(const RunSpec& spec) {
  hciz::HermitianMatrix a =
      hciz::matrix_from_json(hciz::load_json_file(spec.a_file));
  hciz::DPConfig cfg;
  cfg.epsilon = spec.epsilon;
  cfg.k = spec.k;
  std::optional<hciz::SamplerConfig> walk;
  if (spec.burn_in >= 0 || spec.thinning >= 0 || spec.grid_res > 0.0) {
    hciz::SamplerConfig w;
    w.mode = hciz::SamplerMode::inf;
    w.xi = cfg.epsilon / 2.0;
    w.burn_in = spec.burn_in >= 0 ? spec.burn_in : 10000;
    w.thinning = spec.thinning >= 0 ? spec.thinning : 100;
    w.chains = spec.chains;
    w.grid_resolution = spec.grid_res > 0.0 ? spec.grid_res : 1.0 / 128.0;
    walk = w;
  }
  auto ps = hciz::dp_rank_k_batch(a, cfg, spec.num, spec.seed, walk);
  std::vector<hciz::HermitianMatrix> mats;
  mats.reserve(ps.size());
  for (const auto& p : ps) mats.push_back(p.P);
  Json body = matrices_payload(spec, "projections", mats);
  body["k"] = spec.k;
  body["epsilon"] = spec.epsilon;
  write_artifact(spec, body, [&](std::ostream& os) {
    hciz::matrices_to_csv(mats, os);
  });
  return 0;
}

int cmd_partition(const RunSpec& spec) {
  Eigen::VectorXd lambda = parse_csv_vector(spec.lambda_csv);
  Eigen::VectorXd y = parse_csv_vector(spec.y_csv);
  double lz = hciz::log_partition(y, lambda);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", lz);
  std::cout << buf << "\n";
  if (!spec.out.empty()) {
    Json body{{"kind", "partition"}, {"log_partition", lz}};
    hciz::write_text_file(spec.out, body.dump(2) + "\n");
  }
  return 0;
}

int cmd_validate(const RunSpec& spec) {
  hciz::ValidationReport report = hciz::run_suite(spec.suite);
  for (const auto& c : report.checks) {
    std::printf("[%s] %s  statistic=%.6g threshold=%.6g (%.1fs)\n",
                c.passed ? "PASS" : "FAIL", c.name.c_str(), c.statistic,
                c.threshold, c.seconds);
  }
  if (!spec.out.empty()) {
    hciz::write_text_file(spec.out, report.to_json().dump(2) + "\n");
    // CSV series suitable for plotting, one file per check that carries one.
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      const auto& c = report.checks[i];
      if (c.series.empty()) continue;
      std::ostringstream os;
      os << c.series_name << "\n";
      for (const auto& [x, v] : c.series) os << x << "," << v << "\n";
      hciz::write_text_file(spec.out + ".series" + std::to_string(i) + ".csv",
                            os.str());
    }
  }
  return report.all_passed() ? 0 : 1;
}

void add_common_flags(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--num", spec.num, "number of samples");
  cmd->add_option("--seed", spec.seed, "random seed (determines all output)");
  cmd->add_option("--out", spec.out, "output path (stdout when omitted)");
  cmd->add_option("--format", spec.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--config", spec.config_file,
                  "JSON config file; explicit flags win");
}

void add_sampler_flags(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--mode", spec.mode, "sampler mode: tv or inf")
      ->check(CLI::IsMember({"tv", "inf"}));
  cmd->add_option("--xi", spec.xi, "target sampling error");
  cmd->add_option("--burn-in", spec.burn_in, "burn-in steps per chain");
  cmd->add_option("--thin", spec.thinning, "steps between retained samples");
  cmd->add_option("--chains", spec.chains, "number of worker chains");
  cmd->add_option("--grid-res", spec.grid_res, "lattice pitch (inf mode)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampler for exponential densities on unitary orbits"};
  app.require_subcommand(1);
  RunSpec spec;

  CLI::App* orbit = app.add_subcommand(
      "sample-orbit", "sample Hermitian matrices from the orbit density");
  orbit->add_option("--lambda", spec.lambda_csv, "spectrum, non-increasing")
      ->required();
  orbit->add_option("--y", spec.y_csv, "diagonal exponent, non-increasing");
  orbit->add_option("--Y-file", spec.y_file, "Hermitian exponent (JSON)");
  add_sampler_flags(orbit, spec);
  add_common_flags(orbit, spec);

  CLI::App* gt = app.add_subcommand(
      "sample-gt", "sample Rayleigh triangles from the polytope density");
  gt->add_option("--lambda", spec.lambda_csv, "spectrum, non-increasing")
      ->required();
  gt->add_option("--y", spec.y_csv, "diagonal exponent, non-increasing");
  add_sampler_flags(gt, spec);
  add_common_flags(gt, spec);

  CLI::App* fiber = app.add_subcommand(
      "sample-fiber", "sample matrices from the fiber over a triangle");
  fiber->add_option("--P-file", spec.p_file, "triangle JSON file")->required();
  add_common_flags(fiber, spec);

  CLI::App* dp = app.add_subcommand(
      "dp-lowrank", "differentially private rank-k projection sampling");
  dp->add_option("--A-file", spec.a_file, "PSD input matrix (JSON)")
      ->required();
  dp->add_option("--k", spec.k, "target rank")->required();
  dp->add_option("--epsilon", spec.epsilon, "privacy budget")->required();
  dp->add_option("--burn-in", spec.burn_in, "walk burn-in override");
  dp->add_option("--thin", spec.thinning, "walk thinning override");
  dp->add_option("--chains", spec.chains, "number of worker chains");
  dp->add_option("--grid-res", spec.grid_res, "lattice pitch override");
  add_common_flags(dp, spec);

  CLI::App* partition = app.add_subcommand(
      "partition", "print the log partition function of the orbit density");
  partition->add_option("--lambda", spec.lambda_csv, "spectrum")->required();
  partition->add_option("--y", spec.y_csv, "exponent vector")->required();
  partition->add_option("--out", spec.out, "also write JSON here");

  CLI::App* validate = app.add_subcommand(
      "validate", "run a named statistical validation suite");
  validate
      ->add_option("--suite", spec.suite,
                   "haar | rank-one | moments | fiber | dp-sensitivity | "
                   "inf-ratio")
      ->required();
  validate->add_option("--out", spec.out, "report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* cmd : {orbit, gt, fiber, dp}) {
      if (cmd->parsed()) merge_config(*cmd, spec);
    }
    if (orbit->parsed()) return cmd_sample_orbit(spec, false);
    if (gt->parsed()) return cmd_sample_orbit(spec, true);
    if (fiber->parsed()) return cmd_sample_fiber(spec);
    if (dp->parsed()) return cmd_dp_lowrank(spec);
    if (partition->parsed()) return cmd_partition(spec);
    if (validate->parsed()) return cmd_validate(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
