#pragma once

#include "mapscale/quadrature.hpp"

#include <complex>

namespace mapscale {

struct ProfileParams {
  double omega;
  double D;
  int d;
  int d_tilde;

  static ProfileParams quad();
};

// F'(z) = -4 w^3 cosh(w z)/sinh^3(w z)
std::complex<double> F_prime(std::complex<double> z);

// distance profile of simple quadrangulations
double rho0(double r, double tol = 1e-13);
// block distance profile at the dual critical point, closed form
double rho_block_closed(double r, double tol = 1e-13);
// rho0 from a log-spaced table with cubic Hermite interpolation
double rho0_cached(double r);

// int_0^oo sigma(x) x^(-1/d) rho(r / x^(1/d)) dx
double profile_convolution(const RealFn& sigma, const RealFn& rho, double r, int d, double tol = 1e-10);
double rho_block_conv(double r, double tol = 1e-10);
// same convolution with sigma(x/3)/3 and 3^(1/4) rho0(3^(1/4) r)
double rho_block_stuffed(double r, double tol = 1e-10);

// E[r^s] of a profile by quadrature
double profile_moment(const RealFn& rho, double s, double tol = 1e-11);
// E_block[r^s] / E_0[r^s]
double block_moment_ratio(double s);
// lim rho_block(r) / r^(d(2-alpha)-1) as r -> 0
double rho_block_small_r_constant();

}  // namespace mapscale
