#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <vector>

#include "dglab/bump.hpp"
#include "dglab/lattice.hpp"

namespace dglab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Where a cell mass of the s != 0 convolution is placed: right endpoints keep the range bound
// exact; midpoints are second-order accurate for window sums.
enum class Placement { Right, Mid };
enum class Route { Auto, Spectral, Spatial };

struct FrdOptions {
  double cell_width = 1.0 / 16;   // t-grid spacing h; rho / h must be an integer
  double series_tol = 1e-10;      // l_max: (|s|/theta)^{2 l} < series_tol
  Placement placement = Placement::Right;
  int fft_oversample = 4;         // FFT length >= oversample * (grid points)
  bool force_series = false;      // use the convolution series also at s = 0
  long spectral_term_limit = 4096;  // Auto route: spectral while t / rho below this
};

// theta with cos(theta) = 1 - lambda / 2, accurate for small lambda.
inline double theta_of(double lam) { return 2.0 * std::asin(std::min(1.0, std::sqrt(lam) / 2.0)); }

struct ModeWindows {
  std::vector<double> windows;  // (b_i, b_{i+1}]
  double tail = 0.0;            // (b_last, infinity)
  double total = 0.0;           // int_rho^inf, spatial route
  double min_mass = 0.0;        // most negative discrete mass seen (rounding)
};

class FiniteRangeDecomposition {
 public:
  FiniteRangeDecomposition(std::shared_ptr<const BumpProfile> profile, StepDistribution J, double s, double m2,
                           FrdOptions opt = {});

  const BumpProfile& profile() const { return *profile_; }
  const std::shared_ptr<const BumpProfile>& profile_ptr() const { return profile_; }
  const StepDistribution& J() const { return J_; }
  double s() const { return s_; }
  double m2() const { return m2_; }
  double gamma() const { return profile_->gamma(); }
  int l_max() const { return l_max_; }
  const FrdOptions& options() const { return opt_; }
  double rho() const { return double(J_.rho); }
  double h() const { return opt_.cell_width; }

  // Base (s = 0) density d(t) = rho^-2 t P_{t/rho}(lambda') and its integrals; lamp = lambda_{J,m2}.
  double base_density(double t, double lamp) const;          // spectral (finite Chebyshev form)
  double base_density_spatial(double t, double lamp) const;  // periodised profile
  double base_cumulative_spectral(double u, double lamp) const;  // int_0^u d
  double base_cumulative_spatial(double u, double lamp) const;
  double base_window_spectral(double ta, double tb, double lamp) const;
  double base_window_spatial(double ta, double tb, double lamp) const;  // tb may be infinite

  // Multipliers of the covariances of the smoothing step.
  double C_hat_m2(double lamp) const { return 1.0 / lamp - gamma(); }
  double C_hat(double lam, double lamp) const;

  // Windows of int D_t over consecutive (b_i, b_{i+1}] for a single mode, plus the tail.
  ModeWindows mode_windows(double lam, double lamp, const std::vector<double>& bounds,
                           Route route = Route::Auto) const;
  // Same, from precomputed cumulative base integrals on the uniform grid u_m = m h, m = 0..M.
  ModeWindows windows_from_grid(double lam, double lamp, const std::vector<double>& bounds,
                                const Eigen::Ref<const Eigen::VectorXd>& cumulative, bool with_tail = true) const;
  // Grid size M needed so that all windows below t_max are complete.
  long grid_points_for(double t_max) const;

  // D_hat_t(p; s, m2): the direct kernel at s = 0, the smeared series density otherwise.
  double density(double t, double lam, double lamp) const;
  std::vector<double> density_profile(double lam, double lamp, double t_max, std::vector<double>* ts) const;

  bool uses_series() const { return s_ != 0.0 || opt_.force_series; }

 private:
  std::shared_ptr<const BumpProfile> profile_;
  StepDistribution J_;
  double s_, m2_;
  FrdOptions opt_;
  int l_max_ = 0;

  std::vector<double> discrete_masses(double lam, double lamp, const Eigen::Ref<const Eigen::VectorXd>& cum,
                                      double* min_mass) const;
  double total_mass(double lam, double lamp) const;
};

// I(u) = int_0^u d at fixed points u for many modes at once: a dense matrix times cos(k theta).
class SpectralCumulative {
 public:
  SpectralCumulative(const BumpProfile& profile, double rho, std::vector<double> u);
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& theta) const;  // rows: u, cols: modes
  long terms() const { return K_; }

 private:
  Eigen::MatrixXd S_;
  Eigen::VectorXd u_;
  long K_ = 0;
  double rho_, fh0_;
};

}  // namespace dglab
