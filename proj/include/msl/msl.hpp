#pragma once

// Umbrella header: the full library.

#include <msl/degeneracy.hpp>
#include <msl/density.hpp>
#include <msl/difference_operator.hpp>
#include <msl/grid_function.hpp>
#include <msl/linear_map.hpp>
#include <msl/matrix.hpp>
#include <msl/measure.hpp>
#include <msl/oscint.hpp>
#include <msl/polynomial.hpp>
#include <msl/problem.hpp>
#include <msl/rational.hpp>
#include <msl/report.hpp>
#include <msl/selftest.hpp>
#include <msl/witness.hpp>
