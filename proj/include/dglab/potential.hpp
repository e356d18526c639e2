#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "dglab/lattice.hpp"
#include "dglab/regulator.hpp"

namespace dglab {

// ---- smoothed single-site potential ----

struct PotentialCoefficients {
  double beta = 0.0, gamma = 0.0;
  double c_f = 0.0;                 // gamma / 4
  double z0 = 0.0;                  // constant term of log F (dropped from U)
  std::vector<double> z_tilde;      // index q - 1, q = 1..q_max
  std::vector<double> z_tilde_dft;  // same from the period-grid DFT (noise floor ~ eps |log F|)
  std::vector<double> sine_max;     // largest |sine coefficient| seen in the DFT (index 0)
  double min_F = 0.0;
  double dft_floor = 0.0;
  bool below_threshold = false;     // gamma beta under the configured threshold
};

// F(phi) = 1 + sum_q 2 exp(-gamma beta q^2 / 2) cos(q phi); log F = z0 + sum_q z_q cos(q phi).
double smoothed_F(double phi, double gamma_beta);
PotentialCoefficients tilde_z_coefficients(double beta, double gamma, int q_max, int fft_points = 1 << 14,
                                           double threshold = 4.0);
double tilde_z_bound(double gamma_beta, int q);  // 16 exp(-gamma beta (1 + q) / 4)

// ---- covariances of the smoothing step, per mode ----

// (((lambda_J + m2)^-1 - gamma)^-1 + s lambda)^-1
double covariance_C_mode(double gamma, double s, double m2, double lam, double lamJ);
// gamma (1 - s gamma lambda) + (1 - s gamma lambda)^2 C_hat(s, m2)
double covariance_Ctilde_mode(double gamma, double s, double m2, double lam, double lamJ);
double covariance_C_mode(const StepDistribution& J, double gamma, double s, double m2, double p1, double p2);
double covariance_Ctilde_mode(const StepDistribution& J, double gamma, double s, double m2, double p1, double p2);

// ---- test function embedding ----

// f(x) = sum a cos(2 pi n.x) + b sin(2 pi n.x) on the unit torus.
struct FourierMode {
  int n1 = 0, n2 = 0;
  double a = 0.0, b = 0.0;
};
using TestFunction = std::vector<FourierMode>;

// (f, (-Delta_T2)^-1 f) for a finite Fourier series.
double continuum_green_form(const TestFunction& f);

struct TestFunctionEmbedding {
  TorusGeometry geometry;
  std::map<std::pair<long, long>, std::complex<double>> f_hat;  // f_hat_N(k) on wrapped dual indices, k != 0
  double f_sum = 0.0;           // sum_x f_N(x)
  double green_form = 0.0;      // (f_N, (-Delta_J)^-1 f_N)
  double ctilde_form = 0.0;     // (f_N, Ctilde(s, m2) f_N)
  double grad_u_norm2 = 0.0;    // |nabla u_N|^2 on Lambda_N
  std::optional<double> log_G;  // log G_N(Lambda_N, u_N) when the field is materialised
  double u_hat0 = 0.0;
};

// Lattice field f_N(x) (side^2 values).
Field f_N_field(const TestFunction& f, const TorusGeometry& g);
TestFunctionEmbedding embed_test_function(const TestFunction& f, const TorusGeometry& g, const StepDistribution& J,
                                          double gamma, double s, double m2,
                                          const RegulatorParams* reg = nullptr, long max_side_for_field = 512);
Field u_N_field(const TestFunctionEmbedding& e, const StepDistribution& J, double gamma, double s, double m2);

// ---- small tori as explicit matrices (site index x1 + Lx * x2) ----

Eigen::MatrixXd laplacian_matrix_J(const StepDistribution& J, int Lx, int Ly);  // -Delta_J, normalised
Eigen::MatrixXd laplacian_matrix(int Lx, int Ly);                               // -Delta, unnormalised nn

struct ReformulationResult {
  double lhs_ratio = 0.0;  // sum_sigma weight e^{(f,sigma)} / sum_sigma weight
  double rhs_ratio = 0.0;  // e^{(f,Ct f)/2} E_C[Z0(phi + A f)] / E_C[Z0(phi)]
  double lhs_tail = 0.0;   // relative weight on the window boundary
  double rhs_change = 0.0; // change when the Gauss-Hermite order is raised
  long sigma_terms = 0;
  int gh_nodes = 0;
};
ReformulationResult reformulation_check(const StepDistribution& J, int Lx, int Ly, double beta, double gamma, double s,
                                        double m2, const Eigen::VectorXd& f, double window_sd = 8.0,
                                        int gh_nodes = 0);

struct GaussHermite {
  Eigen::VectorXd x, w;  // weight exp(-x^2 / 2) / sqrt(2 pi), sum w = 1
};
GaussHermite gauss_hermite(int n);

}  // namespace dglab
