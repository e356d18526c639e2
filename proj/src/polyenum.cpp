#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "dglab/geometry.hpp"

namespace dglab {

namespace {

// Redelmeier enumeration of fixed king-connected animals, tracking the number of distinct
// (j+1)-blocks met for every placement of the anchor cell inside its block.
class AnimalCounter {
 public:
  AnimalCounter(int L, int K) : L_(L), K_(K), W_(2 * K + 3), H_(K + 2), R_(L * L) {
    cells_ = W_ * H_;
    marked_.assign(cells_, 0);
    for (int y = 0; y < H_; ++y)
      for (int x = 0; x < W_; ++x) {
        int dx = x - (K + 1), dy = y;
        bool allowed = dy < K_ && std::abs(dx) < K_ && (dy > 0 || dx >= 0);
        if (!allowed) marked_[id(x, y)] = 1;
      }
    // block ids per placement
    int span = K_ / L_ + 3;
    BW_ = 2 * span + 1;
    bid_.assign(std::size_t(R_) * cells_, 0);
    for (int r = 0; r < R_; ++r) {
      int rx = r / L_, ry = r % L_;
      for (int y = 0; y < H_; ++y)
        for (int x = 0; x < W_; ++x) {
          int dx = x - (K + 1), dy = y;
          int bx = floor_div(rx + dx, L_) + span, by = floor_div(ry + dy, L_) + span;
          bid_[std::size_t(r) * cells_ + id(x, y)] = std::uint16_t(bx * BW_ + by);
        }
    }
    cnt_.assign(std::size_t(R_) * BW_ * BW_, 0);
    distinct_.assign(R_, 0);
    max_closure_.assign(K_ + 1, 0);
    count_.assign(K_ + 1, 0);
    stack_.assign(K_ + 1, std::vector<int>());
    for (auto& s : stack_) s.reserve(16 * K_ + 16);
    added_.assign(K_ + 1, std::vector<int>());
    for (auto& s : added_) s.reserve(16);
  }

  void run() {
    int origin = id(K_ + 1, 0);
    marked_[origin] = 1;
    stack_[0] = {origin};
    recurse(0);
  }

  const std::vector<int>& max_closure() const { return max_closure_; }
  const std::vector<long long>& counts() const { return count_; }

 private:
  static int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
  int id(int x, int y) const { return y * W_ + x; }

  void add(int c) {
    for (int r = 0; r < R_; ++r) {
      auto& k = cnt_[std::size_t(r) * BW_ * BW_ + bid_[std::size_t(r) * cells_ + c]];
      distinct_[r] += (k++ == 0);
    }
  }
  void remove(int c) {
    for (int r = 0; r < R_; ++r) {
      auto& k = cnt_[std::size_t(r) * BW_ * BW_ + bid_[std::size_t(r) * cells_ + c]];
      distinct_[r] -= (--k == 0);
    }
  }

  void recurse(int depth) {
    // untried cells of this level live in stack_[depth]
    auto& untried = stack_[depth];
    while (!untried.empty()) {
      int c = untried.back();
      untried.pop_back();
      add(c);
      const int size = depth + 1;
      ++count_[size];
      int mx = *std::max_element(distinct_.begin(), distinct_.end());
      max_closure_[size] = std::max(max_closure_[size], mx);
      if (size < K_) {
        auto& next = stack_[depth + 1];
        next = untried;
        std::size_t fresh = next.size();
        int x = c % W_, y = c / W_;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int yy = y + dy, xx = x + dx;
            if (yy < 0 || yy >= H_ || xx < 0 || xx >= W_) continue;
            int d = id(xx, yy);
            if (!marked_[d]) {
              marked_[d] = 1;
              next.push_back(d);
            }
          }
        auto& added = added_[depth];
        added.assign(next.begin() + long(fresh), next.end());
        recurse(depth + 1);
        for (int d : added) marked_[d] = 0;
      }
      remove(c);
    }
  }

  int L_, K_, W_, H_, R_, cells_ = 0, BW_ = 0;
  std::vector<char> marked_;
  std::vector<std::uint16_t> bid_;
  std::vector<std::uint8_t> cnt_;
  std::vector<int> distinct_, max_closure_;
  std::vector<long long> count_;
  std::vector<std::vector<int>> stack_, added_;
};

}  // namespace

SetsizeReport setsizes_margin(int L, int max_blocks, double eta) {
  if (L < 2 || max_blocks < 1 || max_blocks > 16)
    throw Error(ErrorKind::InvalidParameter, "setsizes enumeration needs L >= 2 and 1 <= max_blocks <= 16");
  AnimalCounter ac(L, max_blocks);
  ac.run();
  SetsizeReport rep;
  rep.L = L;
  rep.max_blocks = max_blocks;
  rep.eta = eta;
  rep.count_by_size = ac.counts();
  rep.max_closure_by_size = ac.max_closure();
  rep.margin_components = std::numeric_limits<double>::infinity();
  rep.margin_large = std::numeric_limits<double>::infinity();
  double sup = 1e9;
  for (int k = 1; k <= max_blocks; ++k) {
    rep.placements += rep.count_by_size[k] * L * L;
    double c = rep.max_closure_by_size[k];
    rep.margin_components = std::min(rep.margin_components, k + 8.0 * (1.0 + eta) - (1.0 + eta) * c);
    if (c > 8.0) sup = std::min(sup, k / (c - 8.0) - 1.0);
    if (k > 4) {
      rep.margin_large = std::min(rep.margin_large, k - (1.0 + eta) * c);
      sup = std::min(sup, k / c - 1.0);
    }
  }
  rep.eta_sup = sup;
  return rep;
}

}  // namespace dglab
