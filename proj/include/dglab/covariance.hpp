#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dglab/frd.hpp"

namespace dglab {

// One slice of the decomposition on a torus of side R: hat values over dual indices and
// position values Gamma(0, x), both R x R with wrapped indices.
struct ScaleCovariance {
  double ta = 0.0, tb = 0.0;  // t-window (ta, tb]
  int j = -1;                 // scale label when the window is (L^j/4, L^{j+1}/4]
  long R = 0;
  double s = 0.0, m2 = 0.0;
  std::string J_name;
  double range_radius = 0.0;  // = tb
  double min_mass = 0.0;
  Eigen::MatrixXd hat;
  Eigen::MatrixXd position;

  double at(long x1, long x2) const;
  double max_outside(double radius) const;  // max |Gamma(0,x)| over |x|_inf >= radius
};

double scale_bound(int L, double j);  // L^j / 4

// Hat values of a single window on the torus of side R (8-fold mode symmetry).
Eigen::MatrixXd window_hat(const FiniteRangeDecomposition& F, long R, double ta, double tb, double* min_mass = nullptr);

// Inverse transform of a real, even mode table: Gamma(0, x) = R^-2 sum_k hat(k) e^{i p_k x}.
Eigen::MatrixXd position_from_hat(const Eigen::MatrixXd& hat);

ScaleCovariance window_covariance(const FiniteRangeDecomposition& F, long R, double ta, double tb);
// Gamma_{j+1} on a torus of side R (default 4 L^{j+1}, the embedding used for range checks).
ScaleCovariance scale_covariance(const FiniteRangeDecomposition& F, int L, int j, long R = 0);
// Gamma_{j + k/M, j + (k+1)/M} with L = ell^M.
ScaleCovariance fractional_covariance(const FiniteRangeDecomposition& F, int L, int M, int j, int k, long R = 0);

struct ZeroMode {
  double t_N = 0.0;             // C_hat(0) minus the head of the continuous density, Simpson
  double t_N_trapezoid = 0.0;   // same head by the trapezoid rule
  double t_N_grid = 0.0;        // head from the discrete window masses
  double c_hat0 = 0.0;
};
ZeroMode zero_mode(const FiniteRangeDecomposition& F, int L, int N, int panels = 2048);

// The full torus decomposition on Lambda_N (side L^N): Gamma_1..Gamma_{N-1}, Gamma_N^Lambda, t_N.
struct TorusDecomposition {
  int L = 0, N = 0;
  long R = 0;
  std::vector<Eigen::MatrixXd> scales;  // index j -> Gamma_hat_{j+1}, j = 0..N-2
  Eigen::MatrixXd last;                 // Gamma_hat_N^Lambda at p != 0; 0 at p = 0
  Eigen::MatrixXd target;               // C_hat(s, m2)
  double max_rel_residual = 0.0;        // over p != 0
  double min_hat = 0.0;                 // most negative slice value
  double min_mass = 0.0;
  bool has_zero_mode = false;
  ZeroMode zero;
};
TorusDecomposition torus_decomposition(const FiniteRangeDecomposition& F, int L, int N);

// Infinite-volume slice Gamma_{(ta,tb]}(0, x) by graded dyadic quadrature over the Brillouin zone.
struct InfiniteVolumeOptions {
  int nodes = 12;     // Gauss points per axis per square
  int extra_levels = 3;
  int max_grid = 1024;  // s != 0: cell width doubled (up to rho) while the t-grid exceeds this
};
double infinite_volume_covariance(const FiniteRangeDecomposition& F, double ta, double tb, int x1, int x2,
                                  const InfiniteVolumeOptions& opt = {});

// Gamma_{j+1}(0), Gamma_{j+1}(e1) in infinite volume.
struct ScaleValues {
  double g0 = 0.0, ge1 = 0.0;
  double grad2() const { return 2.0 * (g0 - ge1); }  // nabla^{(e1,-e1)} Gamma(0)
};
ScaleValues infinite_volume_scale(const FiniteRangeDecomposition& F, int L, int j, const InfiniteVolumeOptions& opt = {});

}  // namespace dglab
