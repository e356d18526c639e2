#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dglab/covariance.hpp"
#include "dglab/potential.hpp"
#include "dglab/regulator.hpp"

namespace dglab {

using Rng = std::mt19937_64;

// Weight exp(-1/2 (sigma, (-Delta_J + m2) sigma)) on sigma in (2 pi / sqrt(beta)) Z, Lx x Ly torus.
struct DGModel {
  int Lx = 2, Ly = 2;
  StepDistribution J;
  double beta = 1.0;
  double m2 = 0.0;
  bool pinned = false;  // sigma at site 0 held at 0

  int sites() const { return Lx * Ly; }
  double spacing() const;
};

// Integer heights k; sigma = spacing * k. Site index x1 + Lx * x2.
struct SpinConfig {
  std::vector<long> k;
  double spacing = 1.0;
  double value(int i) const { return spacing * double(k[i]); }
  Eigen::VectorXd values() const;
};

class HeatBath {
 public:
  explicit HeatBath(const DGModel& m, double window_sd = 8.0);
  const DGModel& model() const { return m_; }
  SpinConfig zero_config() const;
  // Exact single-site conditional truncated to +-window_sd conditional standard deviations.
  std::vector<std::pair<long, double>> conditional(const SpinConfig& c, int site) const;
  void update_site(SpinConfig& c, int site, Rng& rng) const;
  void sweep(SpinConfig& c, Rng& rng) const;
  double energy(const SpinConfig& c) const;

 private:
  DGModel m_;
  double w_;
  std::vector<double> diag_;
  std::vector<std::vector<std::pair<int, double>>> off_;
  mutable std::vector<double> buf_;
};

// Max |pi T - pi| for the sweep kernel of a 2-site model on the box |k| <= K (exact Gibbs pi on the box).
double sweep_stationarity_deviation(const DGModel& m, long K, double window_sd = 40.0);

struct BruteForceResult {
  double value = 0.0;
  double tail_bound = 0.0;  // Gaussian tail estimate of the truncated mass
  long terms = 0;
};
using ExactObservable = std::function<double(const Eigen::VectorXd&)>;
BruteForceResult brute_force_expectation(const DGModel& m, const ExactObservable& F, double window_sd = 8.0,
                                         long max_terms = 50000000);

struct ChainOptions {
  long sweeps = 20000;  // measured sweeps per chain
  long burn_in = 1000;
  int chains = 4;
  int thin = 1;
  int min_batches = 32;
  double window_sd = 8.0;
  std::uint64_t seed = 1;
};

struct ChainStats {
  std::string name;
  double mean = 0.0, variance = 0.0, stderr_mean = 0.0, tau_int = 0.5;
  long n_samples = 0;
  int batches = 0;
  std::vector<std::uint64_t> seeds;
};

using Observable = std::function<double(const SpinConfig&)>;
std::vector<ChainStats> run_chains(const DGModel& m, const std::vector<std::pair<std::string, Observable>>& obs,
                                   const ChainOptions& opt);

struct SmearedMoments {
  ChainStats X;             // (f_N, sigma) in the unscaled 2 pi Z heights
  ChainStats X2;
  double variance = 0.0, variance_stderr = 0.0;
  double baseline = 0.0;    // beta (f_N, (-Delta_J + m2)^-1 f_N), the free field value
  double ratio = 0.0;
  double effective_samples = 0.0;
};
// f_N on the model torus (Lx = Ly). Throws InsufficientSampling if tau_int > samples per chain / 50.
SmearedMoments estimate_smeared_moments(const DGModel& m, const Field& fN, const ChainOptions& opt);
double free_field_form(const StepDistribution& J, double m2, const Field& fN);  // (f, (-Delta_J + m2)^-1 f), mean-zero f

// Centred Gaussian vector with covariance C via eigendecomposition (eigenvalues below rel_cut * max dropped).
class GaussianSampler {
 public:
  explicit GaussianSampler(const Eigen::MatrixXd& C, double rel_cut = 1e-13);
  Eigen::VectorXd sample(Rng& rng) const;
  Eigen::MatrixXd sample_batch(Rng& rng, long k) const;  // k samples as columns
  int rank() const { return int(B_.cols()); }
  int dim() const { return int(B_.rows()); }

 private:
  Eigen::MatrixXd B_;
};

// Covariance of Gamma(0, x - y) over the sites of a rows x cols patch (index a + rows * b).
Eigen::MatrixXd patch_covariance(const ScaleCovariance& G, long rows, long cols);

struct ChargeCheck {
  double mc = 0.0, stderr_mc = 0.0, exact = 0.0;
  bool within(double k = 3.0) const { return std::abs(mc - exact) <= k * stderr_mc; }
};
// E[cos(q sqrt(beta) zeta_0)] for zeta ~ G sampled on a small patch.
ChargeCheck charge_check(const ScaleCovariance& G, int q, double beta, long samples, std::uint64_t seed);

struct RegulatorCheck {
  double mean = 0.0, stderr_mean = 0.0;
  double bound = 0.0;  // 2^{|X|_j} G_{j+1}(closure X, phi')
  int rank = 0;
  long patch = 0;
  bool pass() const { return mean + 3.0 * stderr_mean <= bound; }
};
// X at scale j with L^j-blocks on a torus of side X.n L^j; phi_prime on that whole torus; G = Gamma_{j+1}.
RegulatorCheck regulator_expectation_check(const Polymer& X, int L, const Field& phi_prime, const ScaleCovariance& G,
                                           const RegulatorParams& p, long samples, std::uint64_t seed);

}  // namespace dglab
