#include "mapscale/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace mapscale {

namespace bq = boost::math::quadrature;

double integrate(const RealFn& f, double a, double b, double tol, double* err) {
  double e = 0;
  double v = bq::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &e);
  if (err) *err = e;
  return v;
}

double integrate_de(const RealFn& f, double a, double b, double tol, double* err) {
  double e = 0, l1 = 0;
  double v;
  if (std::isinf(b)) {
    thread_local bq::exp_sinh<double> es(12);
    v = es.integrate([&](double x) { return f(x); }, a, b, tol, &e, &l1);
  } else {
    thread_local bq::tanh_sinh<double> ts(12);
    v = ts.integrate([&](double x) { return f(x); }, a, b, tol, &e, &l1);
  }
  if (err) *err = e;
  return v;
}

}  // namespace mapscale
