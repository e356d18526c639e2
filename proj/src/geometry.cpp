#include "dglab/geometry.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dglab {

namespace {

long wrap(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 ipow(__int128 b, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

bool Polymer::contains(long x, long y) const { return std::binary_search(blocks.begin(), blocks.end(), index(x, y)); }

long Polymer::index(long x, long y) const { return wrap(x, n) * n + wrap(y, n); }

Polymer make_polymer(int j, long n, const std::vector<BlockCoord>& blocks) {
  if (n < 1 || j < 0) throw Error(ErrorKind::InvalidParameter, "polymer needs n >= 1 and j >= 0");
  Polymer X;
  X.j = j;
  X.n = n;
  for (auto [x, y] : blocks) X.blocks.push_back(X.index(x, y));
  std::sort(X.blocks.begin(), X.blocks.end());
  X.blocks.erase(std::unique(X.blocks.begin(), X.blocks.end()), X.blocks.end());
  return X;
}

Polymer whole_torus(int j, long n) {
  Polymer X;
  X.j = j;
  X.n = n;
  for (long i = 0; i < n * n; ++i) X.blocks.push_back(i);
  return X;
}

Polymer closure(const Polymer& X, int L) {
  if (L < 2 || X.n % L != 0) throw Error(ErrorKind::InvalidParameter, "closure needs L | n");
  Polymer Y;
  Y.j = X.j + 1;
  Y.n = X.n / L;
  for (long b : X.blocks) {
    auto [x, y] = X.coord(b);
    Y.blocks.push_back((x / L) * Y.n + y / L);
  }
  std::sort(Y.blocks.begin(), Y.blocks.end());
  Y.blocks.erase(std::unique(Y.blocks.begin(), Y.blocks.end()), Y.blocks.end());
  return Y;
}

std::vector<Polymer> components(const Polymer& X) {
  std::vector<Polymer> out;
  std::set<long> left(X.blocks.begin(), X.blocks.end());
  while (!left.empty()) {
    Polymer C;
    C.j = X.j;
    C.n = X.n;
    std::deque<long> q{*left.begin()};
    left.erase(left.begin());
    while (!q.empty()) {
      long b = q.front();
      q.pop_front();
      C.blocks.push_back(b);
      auto [x, y] = X.coord(b);
      for (long dx = -1; dx <= 1; ++dx)
        for (long dy = -1; dy <= 1; ++dy) {
          auto it = left.find(X.index(x + dx, y + dy));
          if (it != left.end()) {
            q.push_back(*it);
            left.erase(it);
          }
        }
    }
    std::sort(C.blocks.begin(), C.blocks.end());
    out.push_back(std::move(C));
  }
  return out;
}

bool is_connected(const Polymer& X) { return components(X).size() <= 1; }

bool is_small_set(const Polymer& X) { return !X.empty() && X.size() <= 4 && is_connected(X); }

Polymer small_set_neighborhood(const Polymer& X) {
  std::vector<BlockCoord> out;
  for (long b : X.blocks) {
    auto [x, y] = X.coord(b);
    for (long dx = -3; dx <= 3; ++dx)
      for (long dy = -3; dy <= 3; ++dy) out.emplace_back(x + dx, y + dy);
  }
  return make_polymer(X.j, X.n, out);
}

std::vector<Polymer> small_sets_containing(int j, long n, long b) {
  std::set<std::vector<long>> level{{b}}, all{{b}};
  Polymer tmp;
  tmp.j = j;
  tmp.n = n;
  for (int k = 1; k < 4; ++k) {
    std::set<std::vector<long>> next;
    for (const auto& S : level)
      for (long c : S) {
        auto [x, y] = tmp.coord(c);
        for (long dx = -1; dx <= 1; ++dx)
          for (long dy = -1; dy <= 1; ++dy) {
            long d = tmp.index(x + dx, y + dy);
            if (std::find(S.begin(), S.end(), d) != S.end()) continue;
            auto T = S;
            T.insert(std::lower_bound(T.begin(), T.end(), d), d);
            next.insert(T);
          }
      }
    all.insert(next.begin(), next.end());
    level = std::move(next);
  }
  std::vector<Polymer> out;
  for (const auto& S : all) {
    Polymer P = tmp;
    P.blocks = S;
    out.push_back(std::move(P));
  }
  return out;
}

Rational::Rational(__int128 p, __int128 q) {
  if (q == 0) throw Error(ErrorKind::InvalidParameter, "zero denominator");
  if (q < 0) p = -p, q = -q;
  __int128 g = gcd128(p, q);
  if (g == 0) g = 1;
  num = p / g;
  den = q / g;
}

std::string int128_str(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string Rational::str() const { return den == 1 ? int128_str(num) : int128_str(num) + "/" + int128_str(den); }

PreimageCount closure_preimage_count(const Polymer& X, int L, const Rational& z, int max_blocks) {
  if (X.empty()) throw Error(ErrorKind::InvalidParameter, "closure_preimage_count needs nonempty X");
  if (X.j < 1) throw Error(ErrorKind::InvalidParameter, "X must be at scale j+1 >= 1");
  const int m = int(X.size()) * L * L;
  if (m > max_blocks || m > 30) throw Error(ErrorKind::SizeLimit, "too many j-blocks to enumerate");
  const long n = X.n * L;
  std::vector<BlockCoord> fine;
  for (long b : X.blocks) {
    auto [x, y] = X.coord(b);
    for (long a = 0; a < L; ++a)
      for (long c = 0; c < L; ++c) fine.emplace_back(x * L + a, y * L + c);
  }
  // lhs numerator over q^m: sum_Y p^{|Y|} q^{m - |Y|}
  std::vector<long long> by_size(m + 1, 0);
  PreimageCount out;
  std::vector<BlockCoord> Y;
  for (long long mask = 0; mask < (1LL << m); ++mask) {
    Y.clear();
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) Y.push_back(fine[i]);
    ++out.subsets;
    Polymer P = make_polymer(X.j - 1, n, Y);
    if (P.empty()) continue;
    if (closure(P, L) == X) ++by_size[Y.size()];
  }
  const __int128 p = z.num, q = z.den;
  __int128 lhs = 0;
  for (int k = 0; k <= m; ++k) lhs += __int128(by_size[k]) * ipow(p, k) * ipow(q, m - k);
  const __int128 qm = ipow(q, m);
  out.lhs = Rational(lhs, qm);
  __int128 base = ipow(p + q, L * L) - ipow(q, L * L);
  out.rhs = Rational(ipow(base, int(X.size())), qm);
  return out;
}

}  // namespace dglab
