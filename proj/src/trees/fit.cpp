// Copyright 2026 The addtree Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "addtree/error.hpp"
#include "addtree/random.hpp"
#include "addtree/tree.hpp"

namespace addtree {
namespace {

// Strictly between a and b (a < b), or b itself when no double fits between.
double midpoint(double a, double b) {
  double m = a + (b - a) * 0.5;
  if (!std::isfinite(m)) m = a * 0.5 + b * 0.5;
  if (!(m > a) || m > b) m = b;
  return m;
}

// Splits whose gain is within rounding of zero relative to the scores involved
// are treated as uninformative.
constexpr double kRelativeGainFloor = 1e-12;

struct SplitCandidate {
  bool found = false;
  int feature = -1;
  std::size_t bin = 0;
  double gain = 0.0;
  double left_weight = 0.0;
  double right_weight = 0.0;
};

struct PendingNode {
  std::int32_t index;
  std::vector<std::size_t> rows;
  int depth;
  double lower;
  double upper;
};

class TreeGrower {
 public:
  TreeGrower(const BinnedMatrix& bins, std::span<const double> weights,
             std::span<const double> grad, std::span<const double> hess,
             const TreeConstraints& constraints, double lambda)
      : bins_(bins),
        weights_(weights),
        grad_(grad),
        hess_(hess),
        constraints_(constraints),
        lambda_(lambda) {
    monotone_active_ = std::any_of(constraints.monotone.begin(), constraints.monotone.end(),
                                   [](int s) { return s != 0; });
    if (constraints.allowed_features) {
      for (int f : *constraints.allowed_features) {
        if (f >= 0 && static_cast<std::size_t>(f) < bins.n_features()) candidates_.push_back(f);
      }
      std::sort(candidates_.begin(), candidates_.end());
      candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
    } else {
      for (std::size_t f = 0; f < bins.n_features(); ++f) candidates_.push_back(static_cast<int>(f));
    }
  }

  Tree grow() {
    std::vector<std::size_t> all(bins_.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    nodes_.push_back(Node{});
    std::deque<PendingNode> queue;
    const double inf = std::numeric_limits<double>::infinity();
    queue.push_back({0, std::move(all), 0, -inf, inf});

    while (!queue.empty()) {
      PendingNode work = std::move(queue.front());
      queue.pop_front();
      double g = 0.0, h = 0.0, w = 0.0;
      for (auto r : work.rows) {
        g += grad_[r];
        h += hess_[r];
        w += weights_[r];
      }
      SplitCandidate best;
      if (work.depth < constraints_.max_depth && work.rows.size() >= 2) {
        best = find_split(work, g, h);
      }
      if (!best.found) {
        Node& leaf = nodes_[work.index];
        leaf = Node::leaf(clamp(-g / (h + lambda_), work.lower, work.upper), w);
        continue;
      }

      const auto feature_bins = bins_.bins(best.feature);
      std::vector<std::size_t> left_rows, right_rows;
      for (auto r : work.rows) {
        (feature_bins[r] <= best.bin ? left_rows : right_rows).push_back(r);
      }
      double left_lower = work.lower, left_upper = work.upper;
      double right_lower = work.lower, right_upper = work.upper;
      const int sign = monotone_sign(best.feature);
      if (sign != 0) {
        const double mid = 0.5 * (best.left_weight + best.right_weight);
        if (sign > 0) {
          left_upper = std::min(left_upper, mid);
          right_lower = std::max(right_lower, mid);
        } else {
          left_lower = std::max(left_lower, mid);
          right_upper = std::min(right_upper, mid);
        }
      }
      const auto left = static_cast<std::int32_t>(nodes_.size());
      const auto right = left + 1;
      nodes_.push_back(Node{});
      nodes_.push_back(Node{});
      nodes_[work.index] =
          Node::split(best.feature, bins_.thresholds(best.feature)[best.bin], left, right, w);
      queue.push_back({left, std::move(left_rows), work.depth + 1, left_lower, left_upper});
      queue.push_back({right, std::move(right_rows), work.depth + 1, right_lower, right_upper});
    }

    // Children always follow their parent, so a reverse sweep makes every
    // internal cover the exact sum of its children.
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      Node& node = nodes_[i];
      if (!node.is_leaf()) node.cover = nodes_[node.left].cover + nodes_[node.right].cover;
    }
    return Tree(std::move(nodes_));
  }

 private:
  int monotone_sign(int feature) const {
    const auto f = static_cast<std::size_t>(feature);
    return f < constraints_.monotone.size() ? constraints_.monotone[f] : 0;
  }

  static double clamp(double v, double lower, double upper) {
    return std::min(std::max(v, lower), upper);
  }

  // Objective reduction of a leaf with gradient sum g, hessian sum h and
  // value w, doubled: -(2 g w + (h + lambda) w^2).
  double leaf_score(double g, double h, double w) const {
    return -(2.0 * g * w + (h + lambda_) * w * w);
  }

  std::vector<int> node_features(std::int32_t node_index) const {
    if (constraints_.colsample_bynode >= 1.0) return candidates_;
    Rng rng(constraints_.seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(node_index) + 1)));
    std::vector<int> kept;
    for (int f : candidates_) {
      if (rng.bernoulli(constraints_.colsample_bynode)) kept.push_back(f);
    }
    if (kept.empty() && !candidates_.empty()) {
      kept.push_back(candidates_[rng.below(candidates_.size())]);
    }
    return kept;
  }

  SplitCandidate find_split(const PendingNode& work, double g, double h) const {
    SplitCandidate best;
    const double parent_weight = clamp(-g / (h + lambda_), work.lower, work.upper);
    const double parent_score =
        monotone_active_ ? leaf_score(g, h, parent_weight) : g * g / (h + lambda_);

    for (int f : node_features(work.index)) {
      const std::size_t nb = bins_.n_bins(f);
      if (nb < 2) continue;
      std::vector<double> hg(nb, 0.0), hh(nb, 0.0);
      std::vector<std::size_t> hc(nb, 0);
      const auto fb = bins_.bins(f);
      for (auto r : work.rows) {
        const auto b = fb[r];
        hg[b] += grad_[r];
        hh[b] += hess_[r];
        ++hc[b];
      }
      const int sign = monotone_sign(f);
      double gl = 0.0, hl = 0.0;
      std::size_t cl = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        gl += hg[b];
        hl += hh[b];
        cl += hc[b];
        if (hc[b] == 0) continue;  // same partition as the previous threshold
        const std::size_t cr = work.rows.size() - cl;
        if (cl == 0 || cr == 0) continue;
        const double gr = g - gl;
        const double hr = h - hl;
        if (hl < constraints_.min_child_weight || hr < constraints_.min_child_weight) continue;
        if (hl + lambda_ <= 0.0 || hr + lambda_ <= 0.0) continue;

        double wl = -gl / (hl + lambda_);
        double wr = -gr / (hr + lambda_);
        double gain, scale;
        if (monotone_active_) {
          wl = clamp(wl, work.lower, work.upper);
          wr = clamp(wr, work.lower, work.upper);
          if ((sign > 0 && wl > wr) || (sign < 0 && wl < wr)) continue;
          const double sl = leaf_score(gl, hl, wl);
          const double sr = leaf_score(gr, hr, wr);
          gain = 0.5 * (sl + sr - parent_score);
          scale = std::abs(sl) + std::abs(sr) + std::abs(parent_score);
        } else {
          const double sl = gl * gl / (hl + lambda_);
          const double sr = gr * gr / (hr + lambda_);
          gain = 0.5 * (sl + sr - parent_score);
          scale = sl + sr + parent_score;
        }
        if (!(gain > constraints_.min_split_loss) || gain <= kRelativeGainFloor * scale) continue;
        if (!best.found || gain > best.gain) {
          best = {true, f, b, gain, wl, wr};
        }
      }
    }
    return best;
  }

  const BinnedMatrix& bins_;
  std::span<const double> weights_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const TreeConstraints& constraints_;
  double lambda_;
  bool monotone_active_ = false;
  std::vector<int> candidates_;
  std::vector<Node> nodes_;
};

}  // namespace

std::vector<double> quantile_thresholds(std::span<const double> column, std::size_t max_bins) {
  if (max_bins < 2) throw InvalidArgument("need at least two bins");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> out;
  if (distinct.size() <= max_bins) {
    for (std::size_t k = 1; k < distinct.size(); ++k) {
      out.push_back(midpoint(distinct[k - 1], distinct[k]));
    }
    return out;
  }
  // Row quantiles; each cut sits just below the quantile value.
  const std::size_t n = sorted.size();
  for (std::size_t b = 1; b < max_bins; ++b) {
    const double q = sorted[b * n / max_bins];
    auto it = std::lower_bound(distinct.begin(), distinct.end(), q);
    if (it == distinct.begin()) continue;
    const double t = midpoint(*(it - 1), *it);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  return out;
}

BinnedMatrix::BinnedMatrix(const Dataset& data, std::size_t max_bins) : n_rows_(data.n_rows()) {
  if (max_bins > 65536) throw InvalidArgument("at most 65536 bins per feature");
  thresholds_.reserve(data.n_features());
  bins_.resize(data.n_features() * n_rows_);
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    const auto col = data.column(j);
    thresholds_.push_back(quantile_thresholds(col, max_bins));
    const auto& t = thresholds_.back();
    for (std::size_t i = 0; i < n_rows_; ++i) {
      const auto b = std::upper_bound(t.begin(), t.end(), col[i]) - t.begin();
      bins_[j * n_rows_ + i] = static_cast<std::uint16_t>(b);
    }
  }
}

Tree fit_tree(const BinnedMatrix& bins, std::span<const double> weights,
              std::span<const double> gradients, std::span<const double> hessians,
              const TreeConstraints& constraints, double reg_lambda) {
  const std::size_t n = bins.n_rows();
  if (n == 0) throw InvalidArgument("cannot fit a tree on empty data");
  if (gradients.size() != n || hessians.size() != n || weights.size() != n) {
    throw InvalidArgument("gradient, hessian and weight lengths must match the row count");
  }
  if (constraints.max_depth < 0) throw InvalidArgument("max_depth must be >= 0");
  if (!(reg_lambda >= 0.0)) throw InvalidArgument("reg_lambda must be >= 0");
  if (!constraints.monotone.empty() && constraints.monotone.size() != bins.n_features()) {
    throw InvalidArgument("monotone constraints need one sign per feature");
  }
  for (int s : constraints.monotone) {
    if (s < -1 || s > 1) throw InvalidArgument("monotone signs must be -1, 0 or +1");
  }
  double hess_sum = 0.0;
  for (double h : hessians) {
    if (!(h >= 0.0)) throw InvalidArgument("hessians must be non-negative");
    hess_sum += h;
  }
  if (hess_sum == 0.0) throw DataError("all hessians are zero");
  return TreeGrower(bins, weights, gradients, hessians, constraints, reg_lambda).grow();
}

Tree fit_tree(const Dataset& data, std::span<const double> gradients,
              std::span<const double> hessians, const TreeConstraints& constraints,
              double reg_lambda) {
  if (data.empty()) throw InvalidArgument("cannot fit a tree on empty data");
  const BinnedMatrix bins(data);
  return fit_tree(bins, data.weights(), gradients, hessians, constraints, reg_lambda);
}

}  // namespace addtree
