#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dglab/common.hpp"

namespace dglab {

using BlockCoord = std::pair<long, long>;

// A union of scale-j blocks on a torus with n blocks per axis (blocks of side L^j).
struct Polymer {
  int j = 0;
  long n = 1;
  std::vector<long> blocks;  // sorted linear indices x * n + y

  long size() const { return long(blocks.size()); }
  bool empty() const { return blocks.empty(); }
  bool contains(long x, long y) const;
  BlockCoord coord(long idx) const { return {idx / n, idx % n}; }
  long index(long x, long y) const;  // wrapped
  bool operator==(const Polymer& o) const { return j == o.j && n == o.n && blocks == o.blocks; }
};

Polymer make_polymer(int j, long n, const std::vector<BlockCoord>& blocks);
Polymer whole_torus(int j, long n);

// Union of the (j+1)-blocks meeting X; requires L | n.
Polymer closure(const Polymer& X, int L);
// l^inf (king-move) connected components, sorted by smallest block index.
std::vector<Polymer> components(const Polymer& X);
bool is_connected(const Polymer& X);
bool is_small_set(const Polymer& X);  // connected and at most 4 blocks
// X*: union of all small sets meeting X (king-distance <= 3 dilation).
Polymer small_set_neighborhood(const Polymer& X);
// All small sets containing block b (enumeration; used as an oracle for X*).
std::vector<Polymer> small_sets_containing(int j, long n, long b);

// Exact rationals on 128-bit integers.
struct Rational {
  __int128 num = 0, den = 1;
  Rational() = default;
  Rational(__int128 p, __int128 q);
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return double(num) / double(den); }
  std::string str() const;
};
std::string int128_str(__int128 v);

struct PreimageCount {
  Rational lhs;  // sum over Y with closure(Y) = X of z^{|Y|_j}, by enumeration
  Rational rhs;  // ((1 + z)^{L^2} - 1)^{|X|_{j+1}}
  long long subsets = 0;
};
// X at scale j+1 on a torus with n blocks per axis; enumerates subsets of the j-blocks of X.
PreimageCount closure_preimage_count(const Polymer& X, int L, const Rational& z, int max_blocks = 20);

// Set-size inequalities over all connected polymers of at most max_blocks blocks at scale j,
// all placements relative to the (j+1)-block grid of side L.
struct SetsizeReport {
  int L = 0, max_blocks = 0;
  double eta = 0.0;
  std::vector<long long> count_by_size;  // fixed animals per size (translation classes)
  std::vector<int> max_closure_by_size;  // max |closure| per size
  double margin_components = 0.0;        // min of |X| + 8(1+eta) - (1+eta)|closure|
  double margin_large = 0.0;             // min over non-small X of |X| - (1+eta)|closure|
  double eta_sup = 0.0;                  // largest eta keeping both margins >= 0 (capped)
  long long placements = 0;
};
SetsizeReport setsizes_margin(int L, int max_blocks, double eta = 0.0);

}  // namespace dglab
