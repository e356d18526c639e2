#include "dglab/regulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace dglab {

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

const int kDir[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

RegulatorParams RegulatorParams::make(double c_kappa, int rho, int L, double c2, double c_w) {
  if (L < 2 || rho < 1 || !(c_kappa > 0.0)) throw Error(ErrorKind::InvalidParameter, "regulator parameters");
  RegulatorParams p;
  p.c2 = c2;
  p.c_w = c_w;
  p.kappa_L = c_kappa * double(rho) * rho / std::log(double(L));
  return p;
}

std::vector<std::pair<long, long>> polymer_sites(const Polymer& X, long b) {
  std::vector<std::pair<long, long>> out;
  for (long idx : X.blocks) {
    auto [bx, by] = X.coord(idx);
    for (long a = 0; a < b; ++a)
      for (long c = 0; c < b; ++c) out.emplace_back(bx * b + a, by * b + c);
  }
  return out;
}

std::vector<std::pair<long, long>> inner_boundary(const Polymer& X, long b) {
  const long R = X.n * b;
  auto in = [&](long x, long y) {
    x = ((x % R) + R) % R;
    y = ((y % R) + R) % R;
    return X.contains(x / b, y / b);
  };
  std::vector<std::pair<long, long>> out;
  for (auto [x, y] : polymer_sites(X, b)) {
    bool edge = false;
    for (auto& d : kDir) edge = edge || !in(x + d[0], y + d[1]);
    if (edge) out.emplace_back(x, y);
  }
  return out;
}

RegulatorTerms regulator_terms(const Field& phi, const Polymer& X, int L) {
  const long R = phi.rows();
  if (X.n * ipow(L, X.j) != R || phi.cols() != R)
    throw Error(ErrorKind::InvalidParameter, "polymer does not tile the field torus");
  return regulator_terms_patch(phi, 0, 0, X, L);
}

RegulatorEvaluator::RegulatorEvaluator(const Polymer& X, int L, long rows, long cols, long x0, long y0)
    : rows_(rows), cols_(cols) {
  const long b = ipow(L, X.j), R = X.n * b;
  s1_ = std::pow(double(L), X.j);
  auto lin = [&](long x, long y) {
    long a = (((x - x0) % R) + R) % R, c = (((y - y0) % R) + R) % R;
    if (a >= rows || c >= cols) throw Error(ErrorKind::InvalidParameter, "field patch does not cover the polymer");
    return int(a + rows * c);
  };
  auto star = [&](long x, long y) {
    std::array<int, 5> s{lin(x, y), 0, 0, 0, 0};
    for (int d = 0; d < 4; ++d) s[d + 1] = lin(x + kDir[d][0], y + kDir[d][1]);
    return s;
  };
  for (auto [x, y] : polymer_sites(X, b)) bulk_.push_back(star(x, y));
  for (auto [x, y] : inner_boundary(X, b)) boundary_.push_back(star(x, y));
  std::map<int, int> pos;
  for (long idx : X.blocks) {
    Polymer B;
    B.j = X.j;
    B.n = X.n;
    B.blocks = {idx};
    std::vector<int> members;
    for (auto [x, y] : polymer_sites(small_set_neighborhood(B), b)) {
      int c = lin(x, y);
      auto it = pos.find(c);
      if (it == pos.end()) {
        std::array<int, 21> st{};
        st[0] = c;
        for (int d = 0; d < 4; ++d) {
          st[1 + d] = lin(x + kDir[d][0], y + kDir[d][1]);
          for (int e = 0; e < 4; ++e) st[5 + 4 * d + e] = lin(x + kDir[d][0] + kDir[e][0], y + kDir[d][1] + kDir[e][1]);
        }
        it = pos.emplace(c, int(stencil_.size())).first;
        stencil_.push_back(st);
      }
      members.push_back(it->second);
    }
    blocks_.push_back(std::move(members));
  }
}

RegulatorTerms RegulatorEvaluator::terms(const double* f) const {
  RegulatorTerms out;
  auto grad2 = [&](const std::array<int, 5>& s) {  // sum_mu 2^-1 |nabla^mu phi|^2
    double acc = 0.0, f0 = f[s[0]];
    for (int d = 1; d < 5; ++d) acc += 0.5 * (f[s[d]] - f0) * (f[s[d]] - f0);
    return acc;
  };
  // L^{-2j} sum 2^-1 |L^j nabla phi|^2: the scale factors cancel in the bulk term
  for (const auto& s : bulk_) out.bulk += grad2(s);
  for (const auto& s : boundary_) out.boundary += s1_ * grad2(s);
  std::vector<double> m1(stencil_.size()), m2(stencil_.size());
  for (std::size_t i = 0; i < stencil_.size(); ++i) {
    const auto& st = stencil_[i];
    double f0 = f[st[0]], a1 = 0.0, a2 = 0.0;
    for (int d = 0; d < 4; ++d) {
      double f1 = f[st[1 + d]];
      a1 = std::max(a1, std::abs(f1 - f0));
      for (int e = 0; e < 4; ++e) a2 = std::max(a2, std::abs(f[st[5 + 4 * d + e]] - f1 - f[st[1 + e]] + f0));
    }
    m1[i] = a1;
    m2[i] = a2;
  }
  const double s2 = s1_ * s1_;
  for (const auto& members : blocks_) {
    double a1 = 0.0, a2 = 0.0;
    for (int i : members) a1 = std::max(a1, m1[i]), a2 = std::max(a2, m2[i]);
    a1 *= s1_;
    a2 *= s2;
    out.W2 += a2 * a2;
    out.w2 += std::max(a1 * a1, a2 * a2);
  }
  return out;
}

double RegulatorEvaluator::log_G(const double* f, const RegulatorParams& p) const {
  RegulatorTerms r = terms(f);
  return p.kappa_L * (p.c1 * r.bulk + p.c2 * r.boundary + p.c1 * r.W2);
}

RegulatorTerms regulator_terms_patch(const Field& phi, long x0, long y0, const Polymer& X, int L) {
  return RegulatorEvaluator(X, L, phi.rows(), phi.cols(), x0, y0).terms(phi.data());
}

double regulator_log_G(const Field& phi, const Polymer& X, int L, const RegulatorParams& p) {
  RegulatorTerms r = regulator_terms(phi, X, L);
  return p.kappa_L * (p.c1 * r.bulk + p.c2 * r.boundary + p.c1 * r.W2);
}

double regulator_log_G_patch(const Field& patch, long x0, long y0, const Polymer& X, int L,
                             const RegulatorParams& p) {
  RegulatorTerms r = regulator_terms_patch(patch, x0, y0, X, L);
  return p.kappa_L * (p.c1 * r.bulk + p.c2 * r.boundary + p.c1 * r.W2);
}

double regulator_G(const Field& phi, const Polymer& X, int L, const RegulatorParams& p) {
  return std::exp(regulator_log_G(phi, X, L, p));
}

double w_j_squared(const Field& phi, const Polymer& X, int L) { return regulator_terms(phi, X, L).w2; }

}  // namespace dglab
