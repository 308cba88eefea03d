#include "levydec/levy_core.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace levydec {

namespace {

constexpr double kSummableRatio = 0.97;
constexpr int kDyadicWindows = 48;

double window_integral(const std::function<double(double)>& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  double sum = 0.0;
  const double h = (b - a) / 4.0;
  for (int p = 0; p < 4; ++p) {
    sum += Rule::integrate(f, a + p * h, a + (p + 1) * h);
  }
  return sum;
}

// Largest ratio a_{k+1}/a_k over the last few windows (0 if they vanish).
double tail_ratio(const std::vector<double>& a) {
  const std::size_t n = a.size();
  const std::size_t look = 8;
  double worst = 0.0;
  for (std::size_t k = n - look - 1; k + 1 < n; ++k) {
    if (a[k + 1] == 0.0) continue;
    if (a[k] == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, a[k + 1] / a[k]);
  }
  return worst;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

JumpWeight JumpWeight::amplitude(std::function<cplx(double)> amp) {
  require(static_cast<bool>(amp), ErrorCode::InvalidArgument, "amplitude function is empty");
  JumpWeight w;
  w.amp_ = std::move(amp);
  return w;
}

JumpWeight JumpWeight::squared(std::function<double(double)> weight_sq) {
  require(static_cast<bool>(weight_sq), ErrorCode::InvalidArgument, "weight function is empty");
  JumpWeight w;
  w.sq_ = std::move(weight_sq);
  return w;
}

JumpWeight JumpWeight::tabulated_squared(std::vector<double> q, std::vector<double> weight_sq) {
  require(q.size() == weight_sq.size() && q.size() >= 2, ErrorCode::InvalidArgument,
          "tabulated weight needs matching columns of at least two nodes");
  for (std::size_t i = 0; i < q.size(); ++i) {
    require(std::isfinite(weight_sq[i]) && weight_sq[i] >= 0.0, ErrorCode::InvalidArgument,
            "tabulated weight must be finite and non-negative");
    if (i > 0) require(q[i] > q[i - 1], ErrorCode::InvalidArgument, "weight nodes must increase");
  }
  JumpWeight w;
  TabulatedDensity table{std::move(q), std::move(weight_sq)};
  w.sq_ = [table](double x) {
    const auto& qs = table.q;
    if (x < qs.front() || x > qs.back()) return 0.0;
    auto it = std::upper_bound(qs.begin(), qs.end(), x);
    if (it == qs.end()) return table.density.back();
    const auto i = static_cast<std::size_t>(it - qs.begin()) - 1;
    const double t = (x - qs[i]) / (qs[i + 1] - qs[i]);
    return table.density[i] + t * (table.density[i + 1] - table.density[i]);
  };
  w.table_ = std::move(table);
  return w;
}

JumpWeight JumpWeight::power_law(double coefficient, double alpha) {
  require(coefficient > 0.0 && std::isfinite(coefficient), ErrorCode::InvalidArgument,
          "power-law coefficient must be > 0");
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument,
          "power-law exponent must be > 0");
  JumpWeight w;
  w.sq_ = [coefficient, alpha](double q) {
    const double aq = std::abs(q);
    return aq == 0.0 ? std::numeric_limits<double>::infinity() : coefficient * std::pow(aq, -alpha - 1.0);
  };
  w.power_law_ = PowerLawMeasure{coefficient, alpha};
  return w;
}

cplx JumpWeight::value(double q) const {
  if (amp_) return amp_(q);
  if (sq_) return std::sqrt(sq_(q));
  return 0.0;
}

double JumpWeight::squared_value(double q) const {
  if (amp_) return std::norm(amp_(q));
  if (sq_) return sq_(q);
  return 0.0;
}

void LevyTriplet::validate() const {
  require(std::isfinite(drift_a), ErrorCode::InvalidArgument, "drift must be finite");
  require(std::isfinite(diffusion_D) && diffusion_D >= 0.0, ErrorCode::InvalidArgument,
          "diffusion D must be >= 0");
  require(q0 > 0.0 && std::isfinite(q0), ErrorCode::InvalidArgument, "q0 must be > 0");
  require(hbar > 0.0 && std::isfinite(hbar), ErrorCode::InvalidArgument, "hbar must be > 0");
}

CharacteristicExponent::CharacteristicExponent(Evaluator eval, ExponentTerms terms, bool closed_form,
                                               std::string description)
    : eval_(std::move(eval)), terms_(terms), closed_form_(closed_form),
      description_(std::move(description)) {
  require(static_cast<bool>(eval_), ErrorCode::InvalidArgument, "exponent evaluator is empty");
}

double stable_measure_constant(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, ErrorCode::AlphaOutOfRange,
          "power-law Levy measure needs alpha in (0, 2)");
  if (std::abs(alpha - 1.0) < 1e-12) return std::numbers::pi;
  return 2.0 * std::tgamma(1.0 - alpha) * std::cos(0.5 * std::numbers::pi * alpha) / alpha;
}

LevyConditionReport levy_condition_check(const std::function<double(double)>& weight_sq,
                                         bool moment_weight) {
  auto f = [&](double q) {
    const double w = weight_sq(q) + weight_sq(-q);
    return moment_weight ? w * q * q / (1.0 + q * q) : w;
  };
  std::vector<double> small(kDyadicWindows), large(kDyadicWindows);
  for (int k = 0; k < kDyadicWindows; ++k) {
    small[k] = window_integral(f, std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
    large[k] = window_integral(f, std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  }
  LevyConditionReport rep;
  rep.small_q_ratio = tail_ratio(small);
  rep.large_q_ratio = tail_ratio(large);
  for (int k = 0; k < kDyadicWindows; ++k) rep.integral += small[k] + large[k];
  const bool finite = std::isfinite(rep.integral);
  rep.satisfied = finite && rep.small_q_ratio < kSummableRatio && rep.large_q_ratio < kSummableRatio;
  if (!rep.satisfied) {
    rep.detail = "dyadic windows do not decay geometrically (q->0 ratio " +
                 format_double(rep.small_q_ratio) + ", q->inf ratio " +
                 format_double(rep.large_q_ratio) + ")";
  }
  return rep;
}

CharacteristicExponent build_exponent(const LevyTriplet& triplet, const QuadratureSpec& quad,
                                      const ExponentOptions& options) {
  triplet.validate();
  const bool has_lambda = !triplet.lambda.is_zero();
  const bool has_omega = !triplet.omega.is_zero();

  if (has_lambda) {
    const auto rep = levy_condition_check(
        [&](double q) { return triplet.lambda.squared_value(q); }, false);
    require(rep.satisfied, ErrorCode::LevyConditionViolated,
            "|lambda|^2 is not integrable: " + rep.detail);
  }
  if (has_omega) {
    const auto rep = levy_condition_check(
        [&](double q) { return triplet.omega.squared_value(q); }, true);
    require(rep.satisfied, ErrorCode::LevyConditionViolated,
            "omega violates the Levy condition: " + rep.detail);
  }

  ExponentTerms terms;
  terms.drift = triplet.drift_a != 0.0;
  terms.diffusion = triplet.diffusion_D != 0.0;
  terms.lambda = has_lambda;
  terms.cross = has_lambda && has_omega;
  terms.omega = has_omega;

  const double a = triplet.drift_a;
  const double D = triplet.diffusion_D;
  const double hbar = triplet.hbar;
  auto gaussian_part = [a, D](double s) { return cplx(-0.5 * D * s * s, -a * s); };

  const bool omega_closed = !has_omega || triplet.omega.power_law().has_value();
  if (!options.force_quadrature && !has_lambda && omega_closed) {
    if (!has_omega) {
      return CharacteristicExponent(gaussian_part, terms, true, "gaussian");
    }
    const auto law = *triplet.omega.power_law();
    const double rate = law.coefficient * stable_measure_constant(law.alpha);
    const double alpha = law.alpha;
    return CharacteristicExponent(
        [=](double s) { return gaussian_part(s) - rate * std::pow(std::abs(s / hbar), alpha); },
        terms, true, "stable alpha=" + format_double(alpha));
  }

  quad.validate();
  const double q0 = triplet.q0;
  std::function<cplx(double)> lambda_part = [](double) { return cplx(0.0); };
  if (has_lambda) {
    const auto& table = triplet.lambda.table();
    if (table && !has_omega) {
      const double mass = table_integrals(table->q, table->density).mass;
      auto tab = *table;
      lambda_part = [tab, mass, hbar](double s) {
        return piecewise_linear_ft(tab.q, tab.density, s / hbar) - mass;
      };
    } else {
      const JumpWeight lambda = triplet.lambda;
      const JumpWeight omega = triplet.omega;
      RealWeight w = [lambda, omega, has_omega](double q) {
        double v = lambda.squared_value(q);
        if (has_omega) v += 2.0 * std::real(omega.value(q) * std::conj(lambda.value(q)));
        return v;
      };
      lambda_part = [w, q0, quad, hbar](double s) { return jump_integral(w, s, false, q0, quad, hbar); };
    }
  }
  std::function<cplx(double)> omega_part = [](double) { return cplx(0.0); };
  if (has_omega) {
    const JumpWeight omega = triplet.omega;
    RealWeight w = [omega](double q) { return omega.squared_value(q); };
    omega_part = [w, q0, quad, hbar](double s) { return jump_integral(w, s, true, q0, quad, hbar); };
  }
  return CharacteristicExponent(
      [=](double s) {
        if (s == 0.0) return cplx(0.0);
        return gaussian_part(s) + lambda_part(s) + omega_part(s);
      },
      terms, false, "quadrature");
}

std::vector<cplx> eval_exponent(const CharacteristicExponent& psi, const SeparationGrid& grid,
                                unsigned workers) {
  std::vector<cplx> out(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { out[i] = psi(grid[i]); });
  return out;
}

DecoherenceFactor cf_at_time(const CharacteristicExponent& psi, double t, const SeparationGrid& grid,
                             unsigned workers) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::NegativeTime, "time must be >= 0");
  DecoherenceFactor phi;
  phi.t = t;
  phi.grid = grid;
  phi.closed_form = psi.closed_form();
  phi.values.resize(grid.size());
  if (t == 0.0) {
    std::fill(phi.values.begin(), phi.values.end(), cplx(1.0));
    return phi;
  }
  parallel_for(grid.size(), workers, [&](std::size_t i) { phi.values[i] = std::exp(t * psi(grid[i])); });
  return phi;
}

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Normalization: return "normalization";
    case Axiom::Modulus: return "modulus";
    case Axiom::Hermitian: return "hermitian";
    case Axiom::PositiveDefinite: return "positive_definite";
  }
  return "unknown";
}

const std::vector<double>& AuditFailed::witness() const {
  for (const auto& c : report_.checks) {
    if (c.axiom == axiom_) return c.witness;
  }
  static const std::vector<double> none;
  return none;
}

AuditReport cf_property_audit(const DecoherenceFactor& phi, int probe_count, std::uint64_t seed,
                              const AuditOptions& options) {
  const auto& grid = phi.grid;
  require(phi.values.size() == grid.size(), ErrorCode::InvalidArgument,
          "decoherence factor values do not match its grid");
  require(probe_count >= 0, ErrorCode::InvalidArgument, "probe count must be >= 0");
  const auto zero = grid.index_of(0.0, 1e-12);
  require(zero.has_value(), ErrorCode::InvalidArgument, "audit grid must contain s = 0");
  require(grid.is_symmetric(1e-9), ErrorCode::InvalidArgument, "audit grid must be symmetric");

  AuditReport report;
  report.tolerance = options.tolerance.value_or(phi.closed_form ? 1e-9 : 1e-6);
  const double tol = report.tolerance;
  const auto& v = phi.values;

  AxiomCheck norm{Axiom::Normalization, true, std::abs(v[*zero] - 1.0), {0.0}};
  norm.passed = norm.worst <= tol;

  AxiomCheck mod{Axiom::Modulus, true, -std::numeric_limits<double>::infinity(), {}};
  AxiomCheck herm{Axiom::Hermitian, true, 0.0, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double excess = std::abs(v[i]) - 1.0;
    if (excess > mod.worst) {
      mod.worst = excess;
      mod.witness = {grid[i]};
    }
    const auto j = grid.index_of(-grid[i], 1e-9);
    const double dev = std::abs(v[*j] - std::conj(v[i]));
    if (dev > herm.worst) {
      herm.worst = dev;
      herm.witness = {grid[i], grid[*j]};
    }
  }
  mod.passed = mod.worst <= tol;
  herm.passed = herm.worst <= tol;

  AxiomCheck psd{Axiom::PositiveDefinite, true, 0.0, {}};
  const double half = 0.5 * std::max(std::abs(grid.front()), std::abs(grid.back()));
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i]) <= half * (1.0 + 1e-12)) candidates.push_back(i);
  }
  const std::size_t m = std::min(options.subset_size, candidates.size());
  double most_negative = std::numeric_limits<double>::infinity();
  for (int p = 0; p < probe_count && m >= 2; ++p) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(p)};
    std::mt19937_64 rng(seq);
    auto pool = candidates;
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    Eigen::MatrixXcd gram(m, m);
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto k = grid.index_of(grid[pool[i]] - grid[pool[j]], 1e-9);
        if (!k) {
          ok = false;
          break;
        }
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[*k];
      }
    }
    if (!ok) {
      ++report.probes_skipped;
      continue;
    }
    ++report.probes_run;
    const Eigen::MatrixXcd herm_part = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm_part, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    if (lowest < most_negative) {
      most_negative = lowest;
      psd.witness.clear();
      for (std::size_t i = 0; i < m; ++i) psd.witness.push_back(grid[pool[i]]);
    }
  }
  psd.worst = std::isfinite(most_negative) ? -most_negative : 0.0;
  psd.passed = !(most_negative < -tol);

  report.checks = {norm, mod, herm, psd};
  for (const auto& c : report.checks) {
    if (!c.passed) {
      report.passed = false;
      std::ostringstream msg;
      msg << "CF audit failed: " << axiom_name(c.axiom) << " violated by " << c.worst
          << " (tol " << tol << ") at s =";
      for (double s : c.witness) msg << ' ' << s;
      throw AuditFailed(report, c.axiom, msg.str());
    }
  }
  return report;
}

}  // namespace levydec
