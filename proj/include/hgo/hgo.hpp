#pragma once

// Umbrella header: gauge geometry of H^n, numerics, mixed radial-angular
// norms, the integral operators and their sharp constants, and the
// experiment runner behind the CLI.

#include "hgo/errors.hpp"
#include "hgo/experiments.hpp"
#include "hgo/heisenberg.hpp"
#include "hgo/kernels.hpp"
#include "hgo/mixed_norm.hpp"
#include "hgo/monte_carlo.hpp"
#include "hgo/operators.hpp"
#include "hgo/quadrature.hpp"
#include "hgo/report.hpp"
#include "hgo/rng.hpp"
#include "hgo/sharp_constants.hpp"
#include "hgo/special_functions.hpp"
#include "hgo/test_function.hpp"
