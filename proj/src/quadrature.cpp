#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "levydec/errors.hpp"
#include "levydec/spectral.hpp"

namespace levydec {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

template <class F>
auto gauss_panel(const F& f, double a, double b) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  decltype(f(c)) sum{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  }
  return sum * h;
}

// Uniform panels on [u, v]; panels touching a singular end are replaced by a
// geometric cascade of `depth` panels shrinking by halves toward that end.
template <class F>
auto graded_segment(const F& f, double u, double v, int panels, int depth, bool sing_lo,
                    bool sing_hi) -> decltype(f(u)) {
  decltype(f(u)) sum{};
  const double h = (v - u) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = u + p * h;
    const double b = (p + 1 == panels) ? v : u + (p + 1) * h;
    const bool grade_lo = sing_lo && p == 0;
    const bool grade_hi = sing_hi && p + 1 == panels;
    if (!grade_lo && !grade_hi) {
      sum += gauss_panel(f, a, b);
      continue;
    }
    if (grade_lo && grade_hi) {
      const double m = 0.5 * (a + b);
      sum += graded_segment(f, a, m, 1, depth, true, false);
      sum += graded_segment(f, m, b, 1, depth, false, true);
      continue;
    }
    const double width = b - a;
    for (int k = 0; k < depth; ++k) {
      const double outer = width * std::ldexp(1.0, -k);
      const double inner = width * std::ldexp(1.0, -k - 1);
      sum += grade_lo ? gauss_panel(f, a + inner, a + outer) : gauss_panel(f, b - outer, b - inner);
    }
    const double rest = width * std::ldexp(1.0, -depth);
    sum += grade_lo ? gauss_panel(f, a, a + rest) : gauss_panel(f, b - rest, b);
  }
  return sum;
}

template <class F>
auto composite(const F& f, double a, double b, int panels, int depth,
               const std::vector<double>& singularities) {
  std::vector<double> cuts{a, b};
  for (double s : singularities) {
    if (s > a && s < b) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  auto is_sing = [&](double x) {
    return std::find(singularities.begin(), singularities.end(), x) != singularities.end();
  };
  decltype(f(a)) sum{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i];
    const double v = cuts[i + 1];
    const int m = std::max(1, static_cast<int>(std::lround(panels * (v - u) / (b - a))));
    sum += graded_segment(f, u, v, m, depth, is_sing(u), is_sing(v));
  }
  return sum;
}

template <class F>
auto refine(const F& f, double a, double b, const QuadratureSpec& spec) {
  using T = decltype(f(a));
  T prev{};
  for (int level = 0; level <= spec.max_refinements; ++level) {
    const T cur = composite(f, a, b, spec.base_panels << level, 24 + 6 * level, spec.singularities);
    if (level > 0) {
      const double diff = std::abs(cur - prev);
      if (diff <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur))) return cur;
    }
    prev = cur;
  }
  fail(ErrorCode::QuadratureNotConverged,
       "quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
           "] did not converge after " + std::to_string(spec.max_refinements) + " refinements");
}

// 1 - cos(x) and x - sin(x) without cancellation for small x.
double one_minus_cos(double x) {
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h;
}

double x_minus_sin(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return x - std::sin(x);
}

struct TailTools {
  boost::math::quadrature::exp_sinh<double> monotone;
  boost::math::quadrature::ooura_fourier_sin<double> osc_sin{1e-10};
  boost::math::quadrature::ooura_fourier_cos<double> osc_cos{1e-10};
};

TailTools& tail_tools() {
  thread_local TailTools tools;
  return tools;
}

// Contribution of q in [A, inf) for a weight g(q) (already reflected for the
// left tail), at frequency omega = s/hbar, A > 0.
cplx right_tail(const std::function<double(double)>& g, double A, double omega, bool compensated,
                double q0, const QuadratureSpec& spec) {
  auto& tools = tail_tools();
  const double tol = spec.abs_tol;
  auto check = [&](double value, double err, const char* what) {
    if (!std::isfinite(value) || err > std::max(tol, spec.rel_tol * std::abs(value))) {
      fail(ErrorCode::QuadratureNotConverged, std::string("tail integral (") + what +
                                                  ") did not converge");
    }
  };

  double mass_err = 0.0;
  double l1 = 0.0;
  const double mass = tools.monotone.integrate(g, A, std::numeric_limits<double>::infinity(),
                                               1e-12, &mass_err, &l1);
  check(mass, mass_err, "mass");

  const double w = std::abs(omega);
  auto shifted = [&](double u) { return g(A + u); };
  const auto [c_val, c_err] = tools.osc_cos.integrate(shifted, w);
  const auto [s_val, s_err] = tools.osc_sin.integrate(shifted, w);
  check(c_val, c_err, "cosine");
  check(s_val, s_err, "sine");
  // int_A^inf g(q) e^{i w q} dq = e^{i w A} (C + i S)
  cplx osc = std::polar(1.0, w * A) * cplx(c_val, s_val);
  if (omega < 0) osc = std::conj(osc);

  cplx total = osc - mass;
  if (compensated) {
    auto comp = [&](double q) { return g(q) * q / (1.0 + (q / q0) * (q / q0)); };
    double comp_err = 0.0;
    const double c = tools.monotone.integrate(comp, A, std::numeric_limits<double>::infinity(),
                                              1e-12, &comp_err, &l1);
    check(c, comp_err, "compensator");
    total -= cplx(0.0, omega * c);
  }
  return total;
}

}  // namespace

void QuadratureSpec::validate() const {
  require(std::isfinite(q_min) && std::isfinite(q_max) && q_max > q_min,
          ErrorCode::InvalidArgument, "quadrature window must be finite and non-empty");
  require(base_panels >= 1 && max_refinements >= 1, ErrorCode::InvalidArgument,
          "quadrature needs at least one panel and one refinement");
  require(abs_tol > 0.0 && rel_tol > 0.0, ErrorCode::InvalidArgument,
          "quadrature tolerances must be positive");
  if (infinite_tails) {
    require(q_min < 0.0 && q_max > 0.0, ErrorCode::InvalidArgument,
            "infinite tails need a window straddling q = 0");
  }
}

cplx jump_integral(const RealWeight& weight, double s, bool compensated, double q0,
                   const QuadratureSpec& spec, double hbar) {
  spec.validate();
  require(q0 > 0.0 && hbar > 0.0, ErrorCode::InvalidArgument, "q0 and hbar must be positive");
  if (s == 0.0 || !weight) return 0.0;
  const double omega = s / hbar;

  auto integrand = [&](double q) -> cplx {
    const double w = weight(q);
    if (w == 0.0) return 0.0;
    const double th = omega * q;
    double im = std::sin(th);
    if (compensated) {
      const double r = (q / q0) * (q / q0);
      im = -x_minus_sin(th) + th * r / (1.0 + r);
    }
    return w * cplx(-one_minus_cos(th), im);
  };

  cplx total = refine(integrand, spec.q_min, spec.q_max, spec);
  if (spec.infinite_tails) {
    total += right_tail(weight, spec.q_max, omega, compensated, q0, spec);
    auto reflected = [&](double p) { return weight(-p); };
    total += right_tail(reflected, -spec.q_min, -omega, compensated, q0, spec);
  }
  return total;
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec) {
  require(b > a, ErrorCode::InvalidArgument, "empty integration interval");
  return refine(f, a, b, spec);
}

}  // namespace levydec
