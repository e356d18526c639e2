#pragma once

#include <memory>

#include "dglab/quadrature.hpp"

namespace dglab {

// kappa(u) = exp(-1/(1-4u^2)) on |u| < 1/2; f = c kappa_hat^2 with int_0^inf t f = 1;
// f_hat = 2 pi c (kappa * kappa) supported in [-1, 1]; gamma = f_hat(0) / (2 pi).
class BumpProfile {
 public:
  explicit BumpProfile(int quadrature_points = 1024);

  static double kappa(double u);
  double kappa_hat_direct(double x) const;  // quadrature, no table
  double kappa_hat(double x) const;         // table (exact at grid points)
  double f(double x) const;
  double f_hat(double xi) const;
  double F1(double y) const;       // int_0^|y| u f(u) du, F1(inf) = 1
  double F1_over_y2(double y) const;  // F1(y) / y^2, stable at y -> 0
  double H(double y) const;        // int_y^1 f_hat(v) / v^2 dv for y in (0, 1]

  double c() const { return c_; }
  double gamma() const { return gamma_; }
  double gamma_from_periodisation() const { return gamma_check_; }
  double spectral_normalisation() const;  // (f_hat(0) - H2(0)) / pi, should be 1
  double table_extent() const { return xmax_; }
  int quadrature_points() const { return nq_; }

  // P_t(lambda) by the periodised spatial sum and by the finite Chebyshev form.
  double P_t(double t, double lambda) const;
  double P_t_chebyshev(double t, double lambda) const;

 private:
  int nq_;
  double xmax_ = 512.0;
  double c_ = 0.0, gamma_ = 0.0, gamma_check_ = 0.0, f0_ = 0.0, f2_ = 0.0;
  GaussRule rule_;
  UniformTable khat_, F1_, fhat_, H2_;
};

std::shared_ptr<const BumpProfile> default_profile();

}  // namespace dglab
