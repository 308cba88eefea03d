#include "levydec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "levydec/errors.hpp"

namespace levydec {

SeparationGrid::SeparationGrid(std::vector<double> points) : points_(std::move(points)) {
  require(!points_.empty(), ErrorCode::InvalidArgument, "separation grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require(std::isfinite(points_[i]), ErrorCode::InvalidArgument,
            "separation grid contains a non-finite point");
    if (i > 0) {
      require(points_[i] > points_[i - 1], ErrorCode::InvalidArgument,
              "separation grid must be strictly increasing");
    }
  }
}

SeparationGrid SeparationGrid::uniform(double lo, double hi, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "grid needs at least one point");
  if (n == 1) return SeparationGrid({lo});
  require(hi > lo, ErrorCode::InvalidArgument, "grid upper bound must exceed lower bound");
  std::vector<double> pts(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = lo + h * static_cast<double>(i);
  pts.back() = hi;
  // Snap the midpoint of symmetric grids onto an exact zero.
  if (std::abs(lo + hi) <= 1e-15 * (hi - lo) && n % 2 == 1) pts[n / 2] = 0.0;
  return SeparationGrid(std::move(pts));
}

std::optional<std::size_t> SeparationGrid::index_of(double s, double tol) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), s);
  const double scale = std::max({1.0, std::abs(points_.front()), std::abs(points_.back())});
  const double eps = tol * scale;
  std::optional<std::size_t> best;
  double best_dist = eps;
  for (auto cand : {it, it == points_.begin() ? it : std::prev(it)}) {
    if (cand == points_.end()) continue;
    const double d = std::abs(*cand - s);
    if (d <= best_dist) {
      best_dist = d;
      best = static_cast<std::size_t>(cand - points_.begin());
    }
  }
  return best;
}

bool SeparationGrid::is_symmetric(double tol) const {
  for (double s : points_) {
    if (!index_of(-s, tol)) return false;
  }
  return true;
}

UniformGridPair::UniformGridPair(double q_min, double dq, std::size_t n, double hbar)
    : q_min_(q_min), dq_(dq), n_(n), hbar_(hbar) {
  require(n >= 2 && (n & (n - 1)) == 0, ErrorCode::InvalidArgument,
          "grid pair size must be a power of two");
  require(dq > 0.0 && std::isfinite(dq), ErrorCode::InvalidArgument, "momentum spacing must be > 0");
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be > 0");
  require(std::isfinite(q_min), ErrorCode::InvalidArgument, "momentum origin must be finite");
  ds_ = 2.0 * std::numbers::pi * hbar_ / (static_cast<double>(n_) * dq_);
}

UniformGridPair UniformGridPair::covering(double q_lo, double q_hi, std::size_t n, double hbar) {
  require(q_hi > q_lo, ErrorCode::InvalidArgument, "empty momentum window");
  return UniformGridPair(q_lo, (q_hi - q_lo) / static_cast<double>(n), n, hbar);
}

std::vector<double> UniformGridPair::momenta() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = q(k);
  return out;
}

std::vector<double> UniformGridPair::separations() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = s(j);
  return out;
}

unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::vector<std::exception_ptr> errors(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nthreads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace levydec
