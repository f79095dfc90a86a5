#pragma once

#include <cmath>

#include "drr/autodiff.hpp"
#include "drr/dual.hpp"

namespace drr {

// Plain-double overloads matching the ad::Var / ad::Dual op set, so generic
// numeric code can be instantiated with any of the three scalar types via
// unqualified calls.
inline double value_of(double a) { return a; }
inline double madd(double a, double b, double c) { return a * b + c; }
inline double axpy(double s, double b, double a) { return a + s * b; }

using ad::Dual;
using ad::Var;
using ad::value_of;
using ad::madd;
using ad::axpy;

// Import std math so `using namespace drr` templates resolve double overloads.
using std::abs;
using std::acos;
using std::cos;
using std::exp;
using std::log;
using std::max;
using std::min;
using std::sin;
using std::sqrt;

using Dual6 = ad::Dual<6>;

}  // namespace drr
