#include "levydec/evolution.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

#include "levydec/errors.hpp"
#include "levydec/process_models.hpp"

namespace levydec {

namespace {

cplx ipow(cplx base, int n) {
  cplx result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

OffDiagonalState scaled(const OffDiagonalState& state, const std::function<cplx(double)>& factor) {
  OffDiagonalState out = state;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= factor(out.grid[i]);
  return out;
}

}  // namespace

OffDiagonalState OffDiagonalState::uniform(const SeparationGrid& grid) {
  return OffDiagonalState{grid, std::vector<cplx>(grid.size(), cplx(1.0))};
}

void OffDiagonalState::validate() const {
  require(values.size() == grid.size(), ErrorCode::InvalidArgument,
          "state values do not match its grid");
  for (const auto& v : values) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::InvalidArgument,
            "state contains non-finite coherences");
  }
  if (const auto z = grid.index_of(0.0)) {
    require(values[*z].real() > 0.0 && std::abs(values[*z].imag()) <= 1e-12 * values[*z].real(),
            ErrorCode::InvalidArgument, "diagonal element (s = 0) must be real and positive");
  }
}

int default_truncation(double nbar) {
  return static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar + 1.0)));
}

double JumpConfig::mean_jumps() const {
  require(horizon >= 0.0 && std::isfinite(horizon), ErrorCode::NegativeTime,
          "jump horizon must be >= 0");
  if (const double* g = std::get_if<double>(&rate)) return *g * horizon;
  const auto& h = std::get<RateHistory>(rate);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < h.t.size(); ++i) {
    const double lo = std::max(0.0, h.t[i]);
    const double hi = std::min(horizon, h.t[i + 1]);
    if (hi <= lo) continue;
    const double span = h.t[i + 1] - h.t[i];
    const double rlo = h.rate[i] + (h.rate[i + 1] - h.rate[i]) * (lo - h.t[i]) / span;
    const double rhi = h.rate[i] + (h.rate[i + 1] - h.rate[i]) * (hi - h.t[i]) / span;
    total += 0.5 * (rlo + rhi) * (hi - lo);
  }
  return total;
}

int JumpConfig::effective_truncation() const {
  return truncation >= 0 ? truncation : default_truncation(mean_jumps());
}

void JumpConfig::validate() const {
  require(horizon >= 0.0 && std::isfinite(horizon), ErrorCode::NegativeTime,
          "jump horizon must be >= 0");
  require(tail_tol > 0.0, ErrorCode::InvalidArgument, "tail tolerance must be > 0");
  if (const double* g = std::get_if<double>(&rate)) {
    require(*g >= 0.0 && std::isfinite(*g), ErrorCode::InvalidArgument, "rate must be >= 0");
  } else {
    const auto& h = std::get<RateHistory>(rate);
    require(h.t.size() == h.rate.size() && h.t.size() >= 2, ErrorCode::InvalidArgument,
            "rate history needs matching columns of at least two nodes");
    for (std::size_t i = 0; i < h.t.size(); ++i) {
      require(std::isfinite(h.rate[i]) && h.rate[i] >= 0.0, ErrorCode::InvalidArgument,
              "rate history must be finite and non-negative");
      if (i > 0) require(h.t[i] > h.t[i - 1], ErrorCode::InvalidArgument, "rate times must increase");
    }
    require(h.t.front() <= 0.0 && h.t.back() >= horizon, ErrorCode::InvalidArgument,
            "rate history must cover [0, horizon]");
  }
}

JumpWeights poisson_weights(const JumpConfig& cfg) {
  cfg.validate();
  const double nbar = cfg.mean_jumps();
  require(std::isfinite(nbar), ErrorCode::InvalidArgument, "mean jump number is not finite");
  const int N = cfg.effective_truncation();
  JumpWeights out;
  out.p.resize(static_cast<std::size_t>(N) + 1, 0.0);
  if (nbar == 0.0) {
    out.p[0] = 1.0;
    return out;
  }
  const double log_nbar = std::log(nbar);
  for (int n = 0; n <= N; ++n) {
    out.p[static_cast<std::size_t>(n)] = std::exp(n * log_nbar - nbar - std::lgamma(n + 1.0));
  }
  // P(X >= N + 1) for X ~ Poisson(nbar) is the regularized lower gamma P(N + 1, nbar).
  out.tail = boost::math::gamma_p(static_cast<double>(N) + 1.0, nbar);
  if (out.tail > cfg.tail_tol) {
    fail(ErrorCode::TruncationTooSmall,
         "Poisson tail " + std::to_string(out.tail) + " exceeds tolerance with N = " +
             std::to_string(N) + "; use N >= " + std::to_string(default_truncation(nbar)));
  }
  return out;
}

JumpWeights gaussian_jump_weights(double nbar, double sigma, int truncation) {
  require(nbar >= 0.0 && sigma > 0.0 && truncation >= 0, ErrorCode::InvalidArgument,
          "Gaussian jump weights need nbar >= 0, sigma > 0, N >= 0");
  JumpWeights out;
  out.markovian = false;
  out.p.resize(static_cast<std::size_t>(truncation) + 1);
  double total = 0.0;
  for (int n = 0; n <= truncation; ++n) {
    const double z = (n - nbar) / sigma;
    out.p[static_cast<std::size_t>(n)] = std::exp(-0.5 * z * z);
    total += out.p[static_cast<std::size_t>(n)];
  }
  for (auto& v : out.p) v /= total;
  return out;
}

OffDiagonalState evolve_closed_form(const OffDiagonalState& state, const CharacteristicExponent& psi,
                                    double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::NegativeTime, "time must be >= 0");
  if (t == 0.0) return state;
  return scaled(state, [&](double s) { return std::exp(t * psi(s)); });
}

OffDiagonalState jump_expansion_evolve(const OffDiagonalState& state, const CfEvaluator& cf,
                                       const JumpWeights& weights) {
  require(!weights.p.empty(), ErrorCode::InvalidArgument, "no jump weights");
  return scaled(state, [&](double s) {
    const cplx phi = cf(s);
    cplx acc = weights.p.back();
    for (std::size_t n = weights.p.size() - 1; n-- > 0;) acc = acc * phi + weights.p[n];
    return acc;
  });
}

OffDiagonalState jump_expansion_evolve(const OffDiagonalState& state, const CfEvaluator& cf,
                                       const JumpConfig& cfg) {
  return jump_expansion_evolve(state, cf, poisson_weights(cfg));
}

OffDiagonalState apply_superoperator(const MomentumPD& pd, const OffDiagonalState& state, int n,
                                     double hbar) {
  require(n >= 0, ErrorCode::InvalidArgument, "superoperator power must be >= 0");
  if (n == 0) return state;
  return scaled(state, [&](double s) { return ipow(pd.cf(s, hbar), n); });
}

OffDiagonalState apply_superoperator_by_convolution(const MomentumPD& pd, const OffDiagonalState& state,
                                                    int n, const UniformGridPair& pair) {
  require(n >= 0, ErrorCode::InvalidArgument, "superoperator power must be >= 0");
  if (n == 0) return state;
  const MomentumPD conv = convolve_power(pd, n, pair);
  return scaled(state, [&](double s) { return conv.cf(s, pair.hbar()); });
}

PathSeparationWeights PathSeparationWeights::point_mass(double s) { return {{s}, {1.0}}; }

PathSeparationWeights PathSeparationWeights::uniform(double lo, double hi, std::size_t n) {
  const auto grid = SeparationGrid::uniform(lo, hi, n);
  PathSeparationWeights w;
  w.s.assign(grid.points().begin(), grid.points().end());
  w.w.assign(n, 1.0 / static_cast<double>(n));
  return w;
}

void PathSeparationWeights::validate() const {
  require(!s.empty() && s.size() == w.size(), ErrorCode::UnnormalizedWeights,
          "path weights need matching, non-empty columns");
  double total = 0.0;
  for (double v : w) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::UnnormalizedWeights,
            "path weights must be non-negative");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::UnnormalizedWeights,
          "path weights sum to " + std::to_string(total) + ", expected 1");
}

double visibility(const CfEvaluator& phi, const PathSeparationWeights& weights) {
  weights.validate();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < weights.s.size(); ++i) acc += weights.w[i] * phi(weights.s[i]);
  // |sum w Phi| <= sum w |Phi| <= 1; the clamp only removes rounding excess.
  return std::clamp(std::abs(acc), 0.0, 1.0);
}

double visibility(const DecoherenceFactor& phi, const PathSeparationWeights& weights) {
  weights.validate();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < weights.s.size(); ++i) {
    const auto k = phi.grid.index_of(weights.s[i], 1e-9);
    require(k.has_value(), ErrorCode::InvalidArgument,
            "path separation " + std::to_string(weights.s[i]) + " is not on the factor grid");
    acc += weights.w[i] * phi.values[*k];
  }
  return std::clamp(std::abs(acc), 0.0, 1.0);
}

TransitionReport transition_scan(const MomentumPD& pd, const std::vector<double>& nbar_list,
                                 const SeparationGrid& grid, double hbar, unsigned workers) {
  require(!nbar_list.empty(), ErrorCode::InvalidArgument, "nbar list is empty");
  for (double nb : nbar_list) {
    require(nb >= 0.0 && std::isfinite(nb), ErrorCode::InvalidArgument, "nbar must be >= 0");
  }
  const Moments m = pd_moments(pd);
  const double second = m.second / (hbar * hbar);

  std::vector<cplx> phi(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { phi[i] = pd.cf(grid[i], hbar); });

  // Read the plateau where |Phi_P| has decayed below 1e-8 (decade search).
  const double reach = std::max({std::abs(grid.front()), std::abs(grid.back()), hbar});
  double plateau_s = reach;
  cplx plateau_phi = pd.cf(plateau_s, hbar);
  for (int k = 1; k <= 12 && std::abs(plateau_phi) > 1e-8; ++k) {
    plateau_s = reach * std::pow(10.0, k);
    plateau_phi = pd.cf(plateau_s, hbar);
  }

  TransitionReport report;
  report.grid = grid;
  report.hbar = hbar;
  report.pd_kind = pd.kind_name();
  for (double nb : nbar_list) {
    TransitionSeries ser;
    ser.nbar = nb;
    ser.abs_cf_compound.resize(grid.size());
    ser.abs_cf_gaussian.resize(grid.size());
    ser.divergence = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = grid[i];
      const double cp = std::exp(nb * (phi[i].real() - 1.0));
      const double g = std::exp(-0.5 * nb * second * s * s);
      ser.abs_cf_compound[i] = cp;
      ser.abs_cf_gaussian[i] = g;
      if (cp > 0.1) ser.divergence = std::max(ser.divergence, std::abs(cp - g));
    }
    ser.plateau = std::exp(nb * (plateau_phi.real() - 1.0));
    ser.plateau_s = plateau_s;
    report.series.push_back(std::move(ser));
  }
  return report;
}

}  // namespace levydec
