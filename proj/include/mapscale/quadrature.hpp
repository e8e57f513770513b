#pragma once

#include <functional>
#include <limits>

namespace mapscale {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// adaptive Gauss-Kronrod; b may be +infinity
double integrate(const RealFn& f, double a, double b, double tol = 1e-12, double* err = nullptr);

// double-exponential rule for integrable endpoint singularities; b may be +infinity
double integrate_de(const RealFn& f, double a, double b, double tol = 1e-12, double* err = nullptr);

}  // namespace mapscale
