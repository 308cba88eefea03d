#include "levydec/process_models.hpp"

#include <cmath>
#include <numbers>

namespace levydec {

GasKernel GasKernel::from_table(const Table& t, double n, double M, double p0) {
  return GasKernel{t.x, t.y, n, M, p0};
}

GasNormalization normalize_gas_kernel(const GasKernel& k) {
  require(k.density_n > 0.0 && k.mass_M > 0.0 && k.momentum_p0 > 0.0, ErrorCode::InvalidArgument,
          "gas density, mass and incoming momentum must be positive");
  require(k.q.size() == k.w.size() && k.q.size() >= 2, ErrorCode::InvalidArgument,
          "gas kernel needs matching columns of at least two nodes");
  for (std::size_t i = 0; i < k.w.size(); ++i) {
    require(std::isfinite(k.w[i]) && std::isfinite(k.q[i]), ErrorCode::NonIntegrableKernel,
            "gas kernel contains non-finite values");
    require(k.w[i] >= 0.0, ErrorCode::InvalidArgument, "gas kernel must be non-negative");
  }
  const double integral = table_integrals(k.q, k.w).mass;
  require(std::isfinite(integral) && !tail_nonintegrable(k.q, k.w), ErrorCode::NonIntegrableKernel,
          "gas kernel integral diverges (tail decays no faster than 1/|q|)");
  require(integral > 0.0, ErrorCode::ZeroKernel, "gas kernel integrates to zero");
  return GasNormalization{k.density_n * integral, (k.mass_M / k.momentum_p0) * integral,
                          MomentumPD::tabulated(k.q, k.w, true)};
}

std::vector<double> marginalize_isotropic(const std::function<double(double)>& radial,
                                          const std::vector<double>& q_nodes, double r_max) {
  require(r_max > 0.0, ErrorCode::InvalidArgument, "r_max must be positive");
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-10;
  std::vector<double> out(q_nodes.size(), 0.0);
  for (std::size_t i = 0; i < q_nodes.size(); ++i) {
    const double lo = std::abs(q_nodes[i]);
    if (lo >= r_max) continue;
    out[i] = 2.0 * std::numbers::pi *
             integrate_real([&](double r) { return radial(r) * r; }, lo, r_max, spec);
  }
  return out;
}

MomentumPD uniform_pd(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, ErrorCode::InvalidArgument,
          "uniform density needs lo < hi");
  const double h = 1.0 / (hi - lo);
  return MomentumPD::custom([lo, hi, h](double q) { return (q >= lo && q <= hi) ? h : 0.0; }, lo, hi,
                            [lo, hi](double w) -> cplx {
                              const double half = 0.5 * w * (hi - lo);
                              const double sinc = std::abs(half) < 1e-4
                                                      ? 1.0 - half * half / 6.0
                                                      : std::sin(half) / half;
                              return std::polar(sinc, 0.5 * w * (lo + hi));
                            });
}

CharacteristicExponent compound_poisson_exponent(double rate, const MomentumPD& pd, double hbar) {
  require(rate >= 0.0 && std::isfinite(rate), ErrorCode::InvalidArgument, "rate must be >= 0");
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be > 0");
  ExponentTerms terms;
  terms.lambda = rate > 0.0;
  const bool closed = !pd.is_tabulated() &&
                      !std::holds_alternative<CustomDensity>(pd.representation());
  return CharacteristicExponent(
      [rate, pd, hbar](double s) {
        if (s == 0.0) return cplx(0.0);
        return rate * (pd.cf(s, hbar) - 1.0);
      },
      terms, closed, "compound_poisson(" + pd.kind_name() + ")");
}

LevyTriplet compound_poisson_triplet(double rate, const MomentumPD& pd, double hbar) {
  LevyTriplet t;
  t.hbar = hbar;
  if (const auto* tab = pd.table()) {
    std::vector<double> w(tab->density);
    for (auto& v : w) v *= rate;
    t.lambda = JumpWeight::tabulated_squared(tab->q, std::move(w));
  } else {
    t.lambda = JumpWeight::squared([rate, pd](double q) { return rate * pd.density(q); });
  }
  return t;
}

Moments pd_moments(const MomentumPD& pd) {
  if (const auto& m = pd.cached_moments()) return *m;
  if (const auto* tab = pd.table()) {
    const int order = heavy_tail_order(tab->q, tab->density);
    fail(ErrorCode::InfiniteMoment, order == 1 ? "tabulated density has a heavy tail: first moment infinite"
                                               : "tabulated density has a heavy tail: second moment infinite");
  }
  const auto* c = std::get_if<CustomDensity>(&pd.representation());
  QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-11;
  const double mean = integrate_real([&](double q) { return c->density(q) * q; }, c->lo, c->hi, spec);
  const double second = integrate_real([&](double q) { return c->density(q) * q * q; }, c->lo, c->hi, spec);
  return Moments{mean, second};
}

CharacteristicExponent gaussian_limit(double rate, const MomentumPD& pd, double hbar) {
  const auto m = pd_moments(pd);
  const double first = rate * m.mean / hbar;
  const double second = rate * m.second / (hbar * hbar);
  ExponentTerms terms;
  terms.drift = first != 0.0;
  terms.diffusion = second != 0.0;
  return CharacteristicExponent(
      [first, second](double s) { return cplx(-0.5 * second * s * s, first * s); }, terms, true,
      "gaussian_limit(" + pd.kind_name() + ")");
}

LevyTriplet gaussian_limit_triplet(double rate, const MomentumPD& pd, double hbar) {
  const auto m = pd_moments(pd);
  LevyTriplet t;
  t.hbar = hbar;
  t.drift_a = -rate * m.mean / hbar;
  t.diffusion_D = rate * m.second / (hbar * hbar);
  return t;
}

void StableParams::validate() const {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0, ErrorCode::AlphaOutOfRange,
          "stable exponent alpha must lie in (0, 2]");
  require(K > 0.0 && std::isfinite(K), ErrorCode::InvalidArgument, "stable rate K must be > 0");
  require(x0 > 0.0 && std::isfinite(x0), ErrorCode::InvalidArgument,
          "correlation length x0 must be > 0");
}

CharacteristicExponent stable_exponent(const StableParams& p) {
  p.validate();
  ExponentTerms terms;
  terms.diffusion = p.alpha == 2.0;
  terms.omega = p.alpha < 2.0;
  const auto [alpha, K, x0] = p;
  if (alpha == 2.0) {
    // Same arithmetic as the diffusion term of build_exponent.
    const double D = 2.0 * K / (x0 * x0);
    return CharacteristicExponent([D](double s) { return cplx(-0.5 * D * s * s, -0.0 * s); }, terms, true,
                                  "stable");
  }
  return CharacteristicExponent(
      [alpha, K, x0](double s) { return cplx(-K * std::pow(std::abs(s / x0), alpha), 0.0); }, terms,
      true, "stable");
}

double stable_levy_coefficient(double alpha) { return 1.0 / stable_measure_constant(alpha); }

LevyTriplet stable_triplet(const StableParams& p, double hbar) {
  p.validate();
  LevyTriplet t;
  t.hbar = hbar;
  if (p.alpha == 2.0) {
    t.diffusion_D = 2.0 * p.K / (p.x0 * p.x0);
    return t;
  }
  const double c = p.K * std::pow(hbar / p.x0, p.alpha) * stable_levy_coefficient(p.alpha);
  t.omega = JumpWeight::power_law(c, p.alpha);
  return t;
}

QuadratureSpec stable_quadrature_spec(double window) {
  QuadratureSpec spec;
  spec.q_min = -window;
  spec.q_max = window;
  spec.base_panels = 64;
  spec.max_refinements = 8;
  spec.singularities = {0.0};
  spec.infinite_tails = true;
  return spec;
}

double calibrate_stable_coefficient(double alpha, const QuadratureSpec& spec) {
  require(alpha > 0.0 && alpha < 2.0, ErrorCode::AlphaOutOfRange,
          "calibration needs alpha in (0, 2)");
  const RealWeight unit = [alpha](double q) { return std::pow(std::abs(q), -alpha - 1.0); };
  const cplx j = jump_integral(unit, 1.0, true, 1.0, spec, 1.0);
  return -1.0 / j.real();
}

void MandelParams::validate() const {
  require(k0 > 0.0 && std::isfinite(k0), ErrorCode::InvalidArgument, "k0 must be > 0");
  require(hbar > 0.0 && std::isfinite(hbar), ErrorCode::InvalidArgument, "hbar must be > 0");
}

std::function<cplx(double)> mandel_cf(const MandelParams& p) {
  p.validate();
  const double k0 = p.k0;
  return [k0](double s) { return mandel_cf_unit(k0 * s); };
}

UniformGridPair mandel_default_pair(const MandelParams& p) {
  p.validate();
  const double hk = p.photon_momentum();
  return UniformGridPair::covering(-3.0 * hk, 5.0 * hk, std::size_t{1} << 17, p.hbar);
}

MomentumPD mandel_pd(const MandelParams& p, const UniformGridPair& pair) {
  p.validate();
  require(std::abs(pair.hbar() - p.hbar) <= 1e-12 * p.hbar, ErrorCode::InvalidArgument,
          "grid pair and Mandel parameters use different hbar");
  const double hk = p.photon_momentum();
  require(pair.q_min() < 0.0 && pair.q_max() > 2.0 * hk, ErrorCode::InvalidArgument,
          "Mandel grid must span [0, 2 hbar k0] with margin");
  const auto phi = mandel_cf(p);
  std::vector<cplx> cf(pair.size());
  for (std::size_t j = 0; j < pair.size(); ++j) cf[j] = phi(pair.s(j));
  InversionOptions opts;
  opts.window_fraction = 0.125;
  return cf_to_pd(cf, pair, opts);
}

}  // namespace levydec
