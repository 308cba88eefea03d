#include "levydec/momentum_pd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levydec/errors.hpp"
#include "levydec/spectral.hpp"

namespace levydec {

namespace {

constexpr double kMassTol = 1e-9;

void validate_table(const std::vector<double>& q, const std::vector<double>& f) {
  require(q.size() == f.size(), ErrorCode::InvalidArgument, "table columns differ in length");
  require(q.size() >= 2, ErrorCode::InvalidArgument, "table needs at least two nodes");
  for (std::size_t i = 0; i < q.size(); ++i) {
    require(std::isfinite(q[i]) && std::isfinite(f[i]), ErrorCode::InvalidArgument,
            "table contains non-finite entries");
    require(f[i] >= 0.0, ErrorCode::InvalidArgument, "density must be non-negative");
    if (i > 0) {
      require(q[i] > q[i - 1], ErrorCode::InvalidArgument, "table nodes must be strictly increasing");
    }
  }
}

// Least-squares slope of log f against log|q| over nodes in the last decade
// toward `edge`.  Returns nullopt when the tail is empty or not decaying.
std::optional<double> tail_slope(const std::vector<double>& q, const std::vector<double>& f,
                                 bool right) {
  const double edge = right ? q.back() : q.front();
  if ((right && edge <= 0.0) || (!right && edge >= 0.0)) return std::nullopt;
  const double inner = std::abs(edge) / 10.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const bool in_tail = right ? q[i] >= inner : q[i] <= -inner;
    if (!in_tail) continue;
    if (f[i] <= 0.0) return std::nullopt;  // table already reaches zero: compact support
    pts.emplace_back(std::log(std::abs(q[i])), std::log(f[i]));
  }
  if (pts.size() < 4) return std::nullopt;
  // Power-law tails decrease monotonically away from the origin.
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const bool outward_smaller = right ? pts[i].second < pts[i - 1].second
                                       : pts[i].second > pts[i - 1].second;
    if (!outward_smaller) return std::nullopt;
  }
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace

TableIntegrals table_integrals(const std::vector<double>& q, const std::vector<double>& f) {
  TableIntegrals out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double a = q[i], b = q[i + 1], fa = f[i], fb = f[i + 1];
    const double h = b - a;
    // Exact integrals of the linear interpolant times 1, q, q^2.
    out.mass += 0.5 * h * (fa + fb);
    out.first += h * (fa * (2 * a + b) + fb * (a + 2 * b)) / 6.0;
    out.second += h * (fa * (3 * a * a + 2 * a * b + b * b) + fb * (a * a + 2 * a * b + 3 * b * b)) / 12.0;
  }
  return out;
}

int heavy_tail_order(const std::vector<double>& q, const std::vector<double>& f) {
  int order = 0;
  for (bool right : {false, true}) {
    const auto slope = tail_slope(q, f, right);
    if (!slope) continue;
    // f ~ |q|^slope: the k-th moment diverges when slope + k >= -1.
    if (*slope >= -2.0) return 1;
    if (*slope >= -3.0) order = 2;
  }
  return order;
}

bool tail_nonintegrable(const std::vector<double>& q, const std::vector<double>& f) {
  for (bool right : {false, true}) {
    const auto slope = tail_slope(q, f, right);
    if (slope && *slope >= -1.0) return true;
  }
  return false;
}

MomentumPD MomentumPD::tabulated(std::vector<double> q, std::vector<double> density, bool normalize) {
  validate_table(q, density);
  const auto integrals = table_integrals(q, density);
  require(integrals.mass > 0.0, ErrorCode::InvalidArgument, "tabulated density has zero mass");
  if (normalize) {
    for (auto& v : density) v /= integrals.mass;
  } else {
    require(std::abs(integrals.mass - 1.0) <= kMassTol, ErrorCode::InvalidArgument,
            "tabulated density is not normalized");
  }
  const double norm = normalize ? integrals.mass : 1.0;
  const int heavy = heavy_tail_order(q, density);
  MomentumPD pd(TabulatedDensity{std::move(q), std::move(density)});
  if (heavy == 0) pd.moments_ = Moments{integrals.first / norm, integrals.second / norm};
  return pd;
}

MomentumPD MomentumPD::gaussian(double mean, double sigma) {
  require(std::isfinite(mean) && sigma > 0.0 && std::isfinite(sigma), ErrorCode::InvalidArgument,
          "Gaussian density needs finite mean and sigma > 0");
  MomentumPD pd(GaussianDensity{mean, sigma});
  pd.moments_ = Moments{mean, mean * mean + sigma * sigma};
  return pd;
}

MomentumPD MomentumPD::mandel(double hbar_k0) {
  require(hbar_k0 > 0.0 && std::isfinite(hbar_k0), ErrorCode::InvalidArgument,
          "photon momentum must be > 0");
  MomentumPD pd(MandelDensity{hbar_k0});
  // Moments follow from the Taylor coefficients of the closed-form CF:
  // Phi = e^{iu}(1 - u^2/5 + ...) gives <q> = hbar k0, <q^2> = (7/5)(hbar k0)^2.
  pd.moments_ = Moments{hbar_k0, 1.4 * hbar_k0 * hbar_k0};
  return pd;
}

MomentumPD MomentumPD::custom(std::function<double(double)> density, double lo, double hi,
                              std::function<cplx(double)> cf) {
  require(static_cast<bool>(density), ErrorCode::InvalidArgument, "custom density is empty");
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, ErrorCode::InvalidArgument,
          "custom density needs a finite support interval");
  return MomentumPD(CustomDensity{std::move(density), lo, hi, std::move(cf)});
}

std::string MomentumPD::kind_name() const {
  switch (rep_.index()) {
    case 0: return "tabulated";
    case 1: return "gaussian";
    case 2: return "mandel";
    default: return "custom";
  }
}

std::pair<double, double> MomentumPD::support() const {
  return std::visit(
      [](const auto& r) -> std::pair<double, double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TabulatedDensity>) {
          // Where the interpolant is nonzero.
          const auto& f = r.density;
          std::size_t first = 0, last = f.size() - 1;
          while (first < last && f[first] == 0.0) ++first;
          while (last > first && f[last] == 0.0) --last;
          return {r.q[first == 0 ? 0 : first - 1], r.q[std::min(last + 1, f.size() - 1)]};
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          return {r.mean - 12.0 * r.sigma, r.mean + 12.0 * r.sigma};
        } else if constexpr (std::is_same_v<T, MandelDensity>) {
          return {0.0, 2.0 * r.hbar_k0};
        } else {
          return {r.lo, r.hi};
        }
      },
      rep_);
}

double MomentumPD::density(double x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TabulatedDensity>) {
          if (x < r.q.front() || x > r.q.back()) return 0.0;
          auto it = std::upper_bound(r.q.begin(), r.q.end(), x);
          if (it == r.q.end()) return r.density.back();
          const auto i = static_cast<std::size_t>(it - r.q.begin()) - 1;
          const double t = (x - r.q[i]) / (r.q[i + 1] - r.q[i]);
          return r.density[i] + t * (r.density[i + 1] - r.density[i]);
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          const double z = (x - r.mean) / r.sigma;
          return std::exp(-0.5 * z * z) / (r.sigma * std::sqrt(2.0 * std::numbers::pi));
        } else if constexpr (std::is_same_v<T, MandelDensity>) {
          fail(ErrorCode::InvalidArgument,
               "the Mandel density is defined by its CF; tabulate it with mandel_pd first");
        } else {
          return (x < r.lo || x > r.hi) ? 0.0 : r.density(x);
        }
      },
      rep_);
}

cplx mandel_cf_unit(double u) {
  const double au = std::abs(u);
  if (au < 1.0) {
    // Even series of the bracket, c_j = 1.5 (-1)^j (2j+2)^2 / (2j+3)!; the closed
    // form cancels badly for small u.
    const double u2 = u * u;
    double term = 1.0, bracket = 1.0;
    for (int j = 0; j < 30 && std::abs(term) > 1e-18; ++j) {
      term *= -u2 * (2.0 * j + 4.0) / ((2.0 * j + 2.0) * (2.0 * j + 2.0) * (2.0 * j + 5.0));
      bracket += term;
    }
    return std::polar(bracket, u);
  }
  const double sc = std::sin(u) / u;
  const double bracket = 1.5 * (sc + (std::cos(u) - sc) / (u * u));
  return std::polar(1.0, u) * bracket;
}

cplx MomentumPD::cf(double s, double hbar) const {
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be > 0");
  const double omega = s / hbar;
  return std::visit(
      [omega](const auto& r) -> cplx {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TabulatedDensity>) {
          return piecewise_linear_ft(r.q, r.density, omega);
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          const double v = r.sigma * omega;
          return std::polar(std::exp(-0.5 * v * v), r.mean * omega);
        } else if constexpr (std::is_same_v<T, MandelDensity>) {
          return mandel_cf_unit(r.hbar_k0 * omega);
        } else {
          if (r.cf) return r.cf(omega);
          QuadratureSpec spec;
          spec.q_min = r.lo;
          spec.q_max = r.hi;
          spec.abs_tol = 1e-12;
          const double re = integrate_real(
              [&](double q) { return r.density(q) * std::cos(omega * q); }, r.lo, r.hi, spec);
          const double im = integrate_real(
              [&](double q) { return r.density(q) * std::sin(omega * q); }, r.lo, r.hi, spec);
          return {re, im};
        }
      },
      rep_);
}

}  // namespace levydec
