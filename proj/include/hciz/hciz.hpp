#pragma once

#include "hciz/dp.hpp"
#include "hciz/errors.hpp"
#include "hciz/fiber.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/io.hpp"
#include "hciz/logconcave.hpp"
#include "hciz/matrix.hpp"
#include "hciz/orbit.hpp"
#include "hciz/random.hpp"
#include "hciz/stats.hpp"
