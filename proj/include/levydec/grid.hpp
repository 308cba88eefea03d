#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace levydec {

/// Ordered separations s = x - y at which off-diagonal elements are sampled.
class SeparationGrid {
 public:
  SeparationGrid() = default;
  /// Throws InvalidArgument unless `points` is non-empty and strictly increasing.
  explicit SeparationGrid(std::vector<double> points);

  /// `n` evenly spaced points on [lo, hi] (n == 1 gives {lo}).
  static SeparationGrid uniform(double lo, double hi, std::size_t n);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  /// True when every s has a partner -s on the grid.
  bool is_symmetric(double tol = 1e-12) const;
  bool contains_zero(double tol = 1e-12) const { return index_of(0.0, tol).has_value(); }
  std::optional<std::size_t> index_of(double s, double tol = 1e-12) const;

 private:
  std::vector<double> points_;
};

/// Uniform momentum grid and its conjugate separation grid, linked by
/// ds = 2*pi*hbar / (n*dq).  Separations are centred: s_j = (j - n/2) ds.
class UniformGridPair {
 public:
  UniformGridPair(double q_min, double dq, std::size_t n, double hbar = 1.0);

  /// Pair whose momentum window is [q_lo, q_hi) with `n` nodes.
  static UniformGridPair covering(double q_lo, double q_hi, std::size_t n, double hbar = 1.0);

  std::size_t size() const { return n_; }
  double hbar() const { return hbar_; }
  double dq() const { return dq_; }
  double ds() const { return ds_; }
  double q_min() const { return q_min_; }
  double q_max() const { return q_min_ + static_cast<double>(n_ - 1) * dq_; }
  double q(std::size_t k) const { return q_min_ + static_cast<double>(k) * dq_; }
  double s(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * ds_;
  }
  std::size_t zero_index() const { return n_ / 2; }

  std::vector<double> momenta() const;
  std::vector<double> separations() const;
  SeparationGrid separation_grid() const { return SeparationGrid(separations()); }

 private:
  double q_min_;
  double dq_;
  std::size_t n_;
  double hbar_;
  double ds_;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads.  Each index is
/// handled independently, so results never depend on the worker count.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Default worker count used by the library (hardware concurrency, at least 1).
unsigned default_workers();

}  // namespace levydec
