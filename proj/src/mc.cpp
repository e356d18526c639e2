#include "dglab/mc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <unsupported/Eigen/FFT>

namespace dglab {

double DGModel::spacing() const { return 2.0 * kPi / std::sqrt(beta); }

Eigen::VectorXd SpinConfig::values() const {
  Eigen::VectorXd v(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) v(Eigen::Index(i)) = spacing * double(k[i]);
  return v;
}

HeatBath::HeatBath(const DGModel& m, double window_sd) : m_(m), w_(window_sd) {
  if (m.Lx < 1 || m.Ly < 1 || !(m.beta > 0.0) || m.m2 < 0.0)
    throw Error(ErrorKind::InvalidParameter, "heat bath model parameters");
  if (!m.pinned && !(m.m2 > 0.0)) throw Error(ErrorKind::InvalidParameter, "unpinned ensemble needs m2 > 0");
  if (!(window_sd >= 6.0)) throw Error(ErrorKind::InvalidParameter, "window must be at least 6 standard deviations");
  const int n = m.sites();
  diag_.assign(n, m.m2);
  off_.resize(n);
  const double w = 1.0 / double(m.J.size());
  for (int x = 0; x < m.Lx; ++x)
    for (int y = 0; y < m.Ly; ++y) {
      int i = x + m.Lx * y;
      std::map<int, double> row;
      for (const auto& o : m.J.offsets) {
        int xx = ((x + o(0)) % m.Lx + m.Lx) % m.Lx, yy = ((y + o(1)) % m.Ly + m.Ly) % m.Ly;
        int k = xx + m.Lx * yy;
        diag_[i] += w;
        if (k == i)
          diag_[i] -= w;
        else
          row[k] -= w;
      }
      off_[i].assign(row.begin(), row.end());
    }
}

SpinConfig HeatBath::zero_config() const {
  SpinConfig c;
  c.k.assign(m_.sites(), 0);
  c.spacing = m_.spacing();
  return c;
}

std::vector<std::pair<long, double>> HeatBath::conditional(const SpinConfig& c, int site) const {
  const double a = c.spacing;
  double h = 0.0;
  for (const auto& [k, w] : off_[site]) h += w * double(c.k[k]);
  const double u = -h / diag_[site];               // conditional mean, lattice units
  const double sd = 1.0 / (a * std::sqrt(diag_[site]));  // conditional sd, lattice units
  long lo = long(std::ceil(u - w_ * sd)), hi = long(std::floor(u + w_ * sd));
  if (lo > hi) lo = hi = std::lround(u);
  std::vector<std::pair<long, double>> out;
  double z = 0.0;
  for (long k = lo; k <= hi; ++k) {
    double d = (double(k) - u) / sd;
    double p = std::exp(-0.5 * d * d);
    out.emplace_back(k, p);
    z += p;
  }
  for (auto& e : out) e.second /= z;
  return out;
}

void HeatBath::update_site(SpinConfig& c, int site, Rng& rng) const {
  const double a = c.spacing;
  double h = 0.0;
  for (const auto& [k, w] : off_[site]) h += w * double(c.k[k]);
  const double u = -h / diag_[site];
  const double sd = 1.0 / (a * std::sqrt(diag_[site]));
  long lo = long(std::ceil(u - w_ * sd)), hi = long(std::floor(u + w_ * sd));
  if (lo > hi) {
    c.k[site] = std::lround(u);
    return;
  }
  buf_.resize(std::size_t(hi - lo + 1));
  double z = 0.0;
  for (long k = lo; k <= hi; ++k) {
    double d = (double(k) - u) / sd;
    z += std::exp(-0.5 * d * d);
    buf_[std::size_t(k - lo)] = z;
  }
  double r = std::uniform_real_distribution<double>(0.0, z)(rng);
  std::size_t idx = std::size_t(std::upper_bound(buf_.begin(), buf_.end(), r) - buf_.begin());
  c.k[site] = lo + long(std::min(idx, buf_.size() - 1));
}

void HeatBath::sweep(SpinConfig& c, Rng& rng) const {
  for (int i = m_.pinned ? 1 : 0; i < m_.sites(); ++i) update_site(c, i, rng);
}

double HeatBath::energy(const SpinConfig& c) const {
  double e = 0.0;
  for (int i = 0; i < m_.sites(); ++i) {
    double si = c.value(i), acc = diag_[i] * si;
    for (const auto& [k, w] : off_[i]) acc += w * c.value(k);
    e += si * acc;
  }
  return 0.5 * e;
}

double sweep_stationarity_deviation(const DGModel& m, long K, double window_sd) {
  if (m.sites() != 2) throw Error(ErrorKind::InvalidParameter, "stationarity check is for 2-site models");
  HeatBath hb(m, window_sd);
  const long W = 2 * K + 1;
  auto id = [&](long k0, long k1) { return (k0 + K) + W * (k1 + K); };
  Eigen::VectorXd pi(W * W);
  SpinConfig c = hb.zero_config();
  for (long a = -K; a <= K; ++a)
    for (long b = -K; b <= K; ++b) {
      c.k = {a, b};
      pi(id(a, b)) = (m.pinned && a != 0) ? 0.0 : std::exp(-hb.energy(c));
    }
  pi /= pi.sum();
  Eigen::VectorXd d = pi;
  for (int site = m.pinned ? 1 : 0; site < 2; ++site) {
    Eigen::VectorXd nd = Eigen::VectorXd::Zero(W * W);
    for (long a = -K; a <= K; ++a)
      for (long b = -K; b <= K; ++b) {
        double p = d(id(a, b));
        if (p == 0.0) continue;
        c.k = {a, b};
        for (const auto& [k, q] : hb.conditional(c, site)) {
          if (k < -K || k > K) continue;
          nd(site == 0 ? id(k, b) : id(a, k)) += p * q;
        }
      }
    d = nd;
  }
  return (d - pi).cwiseAbs().maxCoeff();
}

BruteForceResult brute_force_expectation(const DGModel& m, const ExactObservable& F, double window_sd,
                                         long max_terms) {
  const int n = m.sites();
  if (n > 4) throw Error(ErrorKind::SizeLimit, "brute force is limited to 4 sites");
  if (!m.pinned && !(m.m2 > 0.0)) throw Error(ErrorKind::InvalidParameter, "unpinned ensemble needs m2 > 0");
  Eigen::MatrixXd M = laplacian_matrix_J(m.J, m.Lx, m.Ly) + m.m2 * Eigen::MatrixXd::Identity(n, n);
  std::vector<int> freev;
  for (int i = m.pinned ? 1 : 0; i < n; ++i) freev.push_back(i);
  const int f = int(freev.size());
  Eigen::MatrixXd Mf(f, f);
  for (int i = 0; i < f; ++i)
    for (int k = 0; k < f; ++k) Mf(i, k) = M(freev[i], freev[k]);
  Eigen::MatrixXd Cf = Mf.inverse();
  const double a = m.spacing();
  std::vector<long> K(f);
  BruteForceResult res;
  double total = 1.0;
  for (int i = 0; i < f; ++i) {
    double sd = std::sqrt(Cf(i, i));
    K[i] = std::max(1L, long(std::ceil(window_sd * sd / a)));
    total *= double(2 * K[i] + 1);
    res.tail_bound += std::erfc(double(K[i]) * a / (std::sqrt(2.0) * sd));
  }
  if (total > double(max_terms)) throw Error(ErrorKind::SizeLimit, "state space above cap");
  std::vector<long> k(f);
  for (int i = 0; i < f; ++i) k[i] = -K[i];
  Eigen::VectorXd sig = Eigen::VectorXd::Zero(n);
  double Z = 0.0, acc = 0.0;
  for (;;) {
    for (int i = 0; i < f; ++i) sig(freev[i]) = a * double(k[i]);
    double w = std::exp(-0.5 * sig.dot(M * sig));
    Z += w;
    acc += w * F(sig);
    ++res.terms;
    int i = 0;
    while (i < f && ++k[i] > K[i]) k[i] = -K[i], ++i;
    if (i == f) break;
  }
  res.value = acc / Z;
  return res;
}

namespace {

struct Summary {
  double mean, var, se, tau;
  int nb;
};

Summary batch_summary(const std::vector<std::vector<double>>& per_chain, int min_batches) {
  const int C = int(per_chain.size());
  const int nbpc = std::max(1, (min_batches + C - 1) / C);
  double s = 0.0, s2 = 0.0;
  long n = 0;
  for (const auto& v : per_chain)
    for (double x : v) s += x, s2 += x * x, ++n;
  Summary out{};
  out.mean = s / double(n);
  out.var = std::max(0.0, s2 / double(n) - out.mean * out.mean);
  std::vector<double> bm;
  long blen = 0;
  for (const auto& v : per_chain) {
    blen = long(v.size()) / nbpc;
    if (blen < 1) throw Error(ErrorKind::InsufficientSampling, "fewer samples than batches");
    for (int b = 0; b < nbpc; ++b) {
      double t = 0.0;
      for (long i = b * blen; i < (b + 1) * blen; ++i) t += v[std::size_t(i)];
      bm.push_back(t / double(blen));
    }
  }
  double vb = 0.0;
  for (double x : bm) vb += (x - out.mean) * (x - out.mean);
  vb /= double(bm.size() - 1);
  out.nb = int(bm.size());
  out.se = std::sqrt(vb / double(bm.size()));
  out.tau = out.var > 0.0 ? std::max(0.5, 0.5 * double(blen) * vb / out.var) : 0.5;
  return out;
}

}  // namespace

std::vector<ChainStats> run_chains(const DGModel& m, const std::vector<std::pair<std::string, Observable>>& obs,
                                   const ChainOptions& opt) {
  if (opt.chains < 1 || opt.sweeps < 1 || opt.thin < 1) throw Error(ErrorKind::InvalidParameter, "chain options");
  HeatBath proto(m, opt.window_sd);
  const std::size_t O = obs.size();
  std::vector<std::vector<std::vector<double>>> data(O, std::vector<std::vector<double>>(opt.chains));
  std::vector<std::uint64_t> seeds(opt.chains);
  std::seed_seq sq{opt.seed, std::uint64_t(0x5eed)};
  sq.generate(seeds.begin(), seeds.end());
  parallel_blocks(std::size_t(opt.chains), [&](std::size_t b, std::size_t e, unsigned) {
    HeatBath hb = proto;
    for (std::size_t c = b; c < e; ++c) {
      Rng rng(seeds[c]);
      SpinConfig cfg = hb.zero_config();
      for (long s = 0; s < opt.burn_in; ++s) hb.sweep(cfg, rng);
      for (std::size_t o = 0; o < O; ++o) data[o][c].reserve(std::size_t(opt.sweeps / opt.thin));
      for (long s = 0; s < opt.sweeps; ++s) {
        hb.sweep(cfg, rng);
        if ((s + 1) % opt.thin != 0) continue;
        for (std::size_t o = 0; o < O; ++o) data[o][c].push_back(obs[o].second(cfg));
      }
    }
  });
  std::vector<ChainStats> out;
  for (std::size_t o = 0; o < O; ++o) {
    Summary s = batch_summary(data[o], opt.min_batches);
    ChainStats cs;
    cs.name = obs[o].first;
    cs.mean = s.mean;
    cs.variance = s.var;
    cs.stderr_mean = s.se;
    cs.tau_int = s.tau;
    cs.batches = s.nb;
    cs.n_samples = long(opt.chains) * (opt.sweeps / opt.thin);
    cs.seeds = seeds;
    out.push_back(cs);
  }
  return out;
}

double free_field_form(const StepDistribution& J, double m2, const Field& fN) {
  const long S = fN.rows();
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd A = fN.cast<std::complex<double>>();
  std::vector<std::complex<double>> in(S), out;
  for (long c = 0; c < S; ++c) {
    for (long r = 0; r < S; ++r) in[r] = A(r, c);
    fft.fwd(out, in);
    for (long r = 0; r < S; ++r) A(r, c) = out[r];
  }
  for (long r = 0; r < S; ++r) {
    for (long c = 0; c < S; ++c) in[c] = A(r, c);
    fft.fwd(out, in);
    for (long c = 0; c < S; ++c) A(r, c) = out[c];
  }
  double acc = 0.0;
  for (long a = 0; a < S; ++a)
    for (long b = 0; b < S; ++b) {
      if (a == 0 && b == 0) continue;
      acc += std::norm(A(a, b)) / (torus_lambda_J(J, a, b, S) + m2);
    }
  return acc / double(S * S);
}

SmearedMoments estimate_smeared_moments(const DGModel& m, const Field& fN, const ChainOptions& opt) {
  if (m.Lx != m.Ly || fN.rows() != m.Lx || fN.cols() != m.Ly)
    throw Error(ErrorKind::InvalidParameter, "test function must live on the model torus");
  const double sb = std::sqrt(m.beta);
  Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fN.data(), fN.size());
  auto X = [&](const SpinConfig& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.k.size(); ++i) acc += f(Eigen::Index(i)) * double(c.k[i]);
    return sb * c.spacing * acc;
  };
  auto st = run_chains(m, {{"X", X}, {"X2", [&](const SpinConfig& c) { double x = X(c); return x * x; }}}, opt);
  SmearedMoments r;
  r.X = st[0];
  r.X2 = st[1];
  if (r.X.tau_int > double(opt.sweeps / opt.thin) / 50.0)
    throw Error(ErrorKind::InsufficientSampling, "integrated autocorrelation time exceeds chain length / 50");
  r.variance = r.X2.mean - r.X.mean * r.X.mean;
  r.variance_stderr = r.X2.stderr_mean;
  r.baseline = m.beta * free_field_form(m.J, m.m2, fN);
  r.ratio = r.baseline > 0.0 ? r.variance / r.baseline : 0.0;
  r.effective_samples = double(r.X2.n_samples) / (2.0 * r.X2.tau_int);
  return r;
}

GaussianSampler::GaussianSampler(const Eigen::MatrixXd& C, double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
  const auto& ev = es.eigenvalues();
  double mx = ev.maxCoeff();
  if (!(mx > 0.0) || ev.minCoeff() < -1e-9 * mx) throw Error(ErrorKind::Sampling, "covariance not positive semidefinite");
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_cut * mx) keep.push_back(int(i));
  B_.resize(C.rows(), Eigen::Index(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    B_.col(Eigen::Index(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(ev(keep[c]));
}

Eigen::MatrixXd GaussianSampler::sample_batch(Rng& rng, long k) const {
  std::normal_distribution<double> g;
  Eigen::MatrixXd xi(B_.cols(), k);
  for (long c = 0; c < k; ++c)
    for (Eigen::Index i = 0; i < xi.rows(); ++i) xi(i, c) = g(rng);
  return B_ * xi;
}

Eigen::VectorXd GaussianSampler::sample(Rng& rng) const {
  std::normal_distribution<double> g;
  Eigen::VectorXd xi(B_.cols());
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = g(rng);
  return B_ * xi;
}

Eigen::MatrixXd patch_covariance(const ScaleCovariance& G, long rows, long cols) {
  const long n = rows * cols;
  Eigen::MatrixXd C(n, n);
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < n; ++k) C(i, k) = G.at(i % rows - k % rows, i / rows - k / rows);
  return C;
}

ChargeCheck charge_check(const ScaleCovariance& G, int q, double beta, long samples, std::uint64_t seed) {
  GaussianSampler S(patch_covariance(G, 3, 3));
  Rng rng(seed);
  const double w = double(q) * std::sqrt(beta);
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    double v = std::cos(w * S.sample(rng)(4));
    s += v;
    s2 += v * v;
  }
  ChargeCheck c;
  c.mc = s / double(samples);
  c.stderr_mc = std::sqrt(std::max(0.0, s2 / double(samples) - c.mc * c.mc) / double(samples - 1));
  c.exact = std::exp(-0.5 * beta * double(q) * q * G.at(0, 0));
  return c;
}

RegulatorCheck regulator_expectation_check(const Polymer& X, int L, const Field& phi_prime, const ScaleCovariance& G,
                                           const RegulatorParams& p, long samples, std::uint64_t seed) {
  long b = 1;
  for (int i = 0; i < X.j; ++i) b *= L;
  const long R = X.n * b;
  if (phi_prime.rows() != R || phi_prime.cols() != R) throw Error(ErrorKind::InvalidParameter, "phi' must cover the torus");
  if (X.n % L != 0) throw Error(ErrorKind::InvalidParameter, "torus does not tile at the next scale");
  Polymer Xs = small_set_neighborhood(X);
  // bounding box of X* unwrapped around its first block
  auto [cx, cy] = Xs.coord(Xs.blocks.front());
  long minx = cx, maxx = cx, miny = cy, maxy = cy;
  for (long idx : Xs.blocks) {
    auto [x, y] = Xs.coord(idx);
    long dx = x - cx, dy = y - cy;
    if (dx > X.n / 2) dx -= X.n;
    if (dx < -X.n / 2) dx += X.n;
    if (dy > X.n / 2) dy -= X.n;
    if (dy < -X.n / 2) dy += X.n;
    minx = std::min(minx, cx + dx), maxx = std::max(maxx, cx + dx);
    miny = std::min(miny, cy + dy), maxy = std::max(maxy, cy + dy);
  }
  const long P = std::max(maxx - minx + 1, maxy - miny + 1) * b + 4;
  if (P >= R) throw Error(ErrorKind::SizeLimit, "torus too small for the polymer neighbourhood");
  if (double(P) >= double(G.R) - G.range_radius) throw Error(ErrorKind::InvalidParameter, "embedding torus of Gamma too small");
  const long x0 = minx * b - 2, y0 = miny * b - 2;
  Field base(P, P);
  for (long a = 0; a < P; ++a)
    for (long c = 0; c < P; ++c) base(a, c) = phi_prime(((x0 + a) % R + R) % R, ((y0 + c) % R + R) % R);

  GaussianSampler S(patch_covariance(G, P, P), 1e-12);
  RegulatorEvaluator ev(X, L, P, P, x0, y0);
  Rng rng(seed);
  double s = 0.0, s2 = 0.0;
  const long batch = 256;
  Eigen::VectorXd b0 = Eigen::Map<const Eigen::VectorXd>(base.data(), base.size());
  for (long done = 0; done < samples; done += batch) {
    Eigen::MatrixXd Z = S.sample_batch(rng, std::min(batch, samples - done));
    Z.colwise() += b0;
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
      double v = std::exp(ev.log_G(Z.col(c).data(), p));
      s += v;
      s2 += v * v;
    }
  }
  RegulatorCheck r;
  r.mean = s / double(samples);
  r.stderr_mean = std::sqrt(std::max(0.0, s2 / double(samples) - r.mean * r.mean) / double(samples - 1));
  r.rank = S.rank();
  r.patch = P;
  Polymer Xb = closure(X, L);
  r.bound = std::pow(2.0, double(X.size())) * std::exp(regulator_log_G(phi_prime, Xb, L, p));
  return r;
}

}  // namespace dglab
