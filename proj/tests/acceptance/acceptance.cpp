// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "levydec/evolution.hpp"
#include "levydec/levy_core.hpp"
#include "levydec/process_models.hpp"
#include "levydec/sampling.hpp"
#include "levydec/spectral.hpp"
#include "levydec/table_io.hpp"

using namespace levydec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

int run(int id, const char* title, double limit_seconds, const Criterion& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_seconds) {
    out.pass = false;
    out.detail << " [runtime limit " << limit_seconds << " s exceeded]";
  }
  std::printf("%s criterion %d: %s (%.2f s)%s\n", out.pass ? "PASS" : "FAIL", id, title, secs,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.pass ? 0 : 1;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

MomentumPD gas_pd(double& rate) {
  const Table t = read_table(std::string(LEVYDEC_DATA_DIR) + "/gas_kernel_example.txt");
  const auto norm = normalize_gas_kernel(GasKernel::from_table(t, 1.5, 1.0, 1.0));
  rate = norm.rate;
  return norm.pd;
}

// Central differences with one Richardson step.
cplx derivative1(const std::function<cplx(double)>& f, double h) {
  auto d = [&](double k) { return (f(k) - f(-k)) / (2.0 * k); };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

cplx derivative2(const std::function<cplx(double)>& f, double h) {
  auto d = [&](double k) { return (f(k) - 2.0 * f(0.0) + f(-k)) / (k * k); };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

bool relative_agree(cplx a, cplx b, double tol) {
  const double diff = std::abs(a - b);
  return diff == 0.0 || diff <= tol * std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& out) {
  struct Case {
    std::string name;
    CharacteristicExponent psi;
    double range;
  };
  std::vector<Case> cases;
  LevyTriplet gauss;
  gauss.drift_a = 0.3;
  gauss.diffusion_D = 1.0;
  cases.push_back({"gaussian", build_exponent(gauss, QuadratureSpec{}), 10.0});
  cases.push_back({"mandel", compound_poisson_exponent(2.0, MomentumPD::mandel(1.0)), 20.0});
  const MandelParams mp{1.0, 1.0};
  cases.push_back({"mandel-fft", compound_poisson_exponent(2.0, mandel_pd(mp, mandel_default_pair(mp))), 20.0});
  double rate = 0.0;
  const MomentumPD gas = gas_pd(rate);
  cases.push_back({"gas-kernel", compound_poisson_exponent(rate, gas), 10.0});
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const StableParams sp{alpha, 1.0, 1.0};
    cases.push_back({"stable-" + num(alpha), stable_exponent(sp), 10.0});
    if (alpha < 2.0) {
      ExponentOptions opts;
      opts.force_quadrature = true;
      cases.push_back({"stable-quad-" + num(alpha),
                       build_exponent(stable_triplet(sp), stable_quadrature_spec(), opts), 10.0});
    }
  }
  int passed = 0;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = SeparationGrid::uniform(-c.range, c.range, 1001);
    const DecoherenceFactor phi = cf_at_time(c.psi, 1.0, grid);
    try {
      const AuditReport rep = cf_property_audit(phi, 32, 20240601);
      ++passed;
      if (rep.tolerance != (c.psi.closed_form() ? 1e-9 : 1e-6)) out.check(false, c.name + " tolerance");
    } catch (const AuditFailed& e) {
      out.check(false, c.name + ": " + e.what());
    }
    out.detail << " " << c.name << " "
               << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "s;";
  }
  out.detail << " processes audited=" << cases.size() << " passed=" << passed << " grid=1001 points";
}

void criterion2(Outcome& out) {
  const MomentumPD pd = MomentumPD::mandel(1.0);
  const auto grid = SeparationGrid::uniform(-50.0, 50.0, 2001);
  const CfEvaluator cf = [&](double s) { return pd.cf(s); };
  for (double nbar : {0.5, 2.0, 10.0}) {
    JumpConfig cfg;
    cfg.rate = nbar;
    cfg.horizon = 1.0;
    const JumpWeights w = poisson_weights(cfg);
    const auto jump = jump_expansion_evolve(OffDiagonalState::uniform(grid), cf, w);
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const cplx closed = std::exp(nbar * (cf(grid[i]) - 1.0));
      dev = std::max(dev, std::abs(jump.values[i] - closed));
    }
    // Summing N+1 terms and exponentiating adds a few ulps on top of the tail.
    const double rounding = 4.0 * static_cast<double>(w.p.size()) * 2.220446049250313e-16;
    out.check(dev <= w.tail + rounding, "nbar=" + num(nbar) + " tail bound");
    out.check(dev <= 1e-10, "nbar=" + num(nbar) + " 1e-10");
    out.detail << " nbar=" << nbar << ": N=" << w.p.size() - 1 << " dev=" << sci(dev) << " tail=" << sci(w.tail)
               << ";";
  }
}

void criterion3(Outcome& out) {
  // Window [-2, 14) hbar k0 holds the 5-fold support of both densities.
  const auto pair = UniformGridPair::covering(-2.0, 14.0, std::size_t{1} << 18);
  const MandelParams mp{1.0, 1.0};
  const MomentumPD mandel = mandel_pd(mp, pair);
  // Uniform on [0, 1], tabulated on the momentum grid (edges resolved by one cell).
  const double dq = pair.dq();
  const MomentumPD uniform = MomentumPD::tabulated({-dq, 0.0, 1.0, 1.0 + dq}, {0.0, 1.0, 1.0, 0.0}, true);
  const auto seps = pair.separations();
  for (const auto& [name, pd] : {std::pair<std::string, MomentumPD>{"mandel", mandel}, {"uniform", uniform}}) {
    for (int n : {2, 3, 5}) {
      const auto cf_n = pd_to_cf(convolve_power(pd, n, pair), pair);
      double dev = 0.0;
      for (std::size_t j = 0; j < seps.size(); ++j) {
        if (std::abs(seps[j]) > 20.0) continue;
        dev = std::max(dev, std::abs(cf_n[j] - std::pow(pd.cf(seps[j]), n)));
      }
      out.check(dev < 1e-6, name + " n=" + std::to_string(n));
      out.detail << " " << name << " n=" << n << ": " << sci(dev) << ";";
    }
  }
}

void criterion4(Outcome& out) {
  double rate = 0.0;
  const MomentumPD gas = gas_pd(rate);
  struct Case {
    std::string name;
    double rate;
    MomentumPD pd;
  };
  const std::vector<Case> cases = {
      {"mandel", 1.0, MomentumPD::mandel(1.0)}, {"gaussian", 0.7, MomentumPD::gaussian(0.4, 1.3)}, {"gas", rate, gas}};
  for (const auto& c : cases) {
    const auto cp = compound_poisson_exponent(c.rate, c.pd);
    const auto g = gaussian_limit(c.rate, c.pd);
    const std::function<cplx(double)> fcp = [&](double s) { return cp(s); };
    const std::function<cplx(double)> fg = [&](double s) { return g(s); };
    const double h = 1e-2;
    out.check(relative_agree(cp(0.0), g(0.0), 1e-6), c.name + " value");
    const cplx d1cp = derivative1(fcp, h), d1g = derivative1(fg, h);
    const cplx d2cp = derivative2(fcp, h), d2g = derivative2(fg, h);
    out.check(relative_agree(d1cp, d1g, 1e-6), c.name + " first derivative");
    out.check(relative_agree(d2cp, d2g, 1e-6), c.name + " second derivative");
    out.detail << " " << c.name << ": d1 rel " << sci(std::abs(d1cp - d1g) / std::abs(d1g)) << ", d2 rel "
               << sci(std::abs(d2cp - d2g) / std::abs(d2g)) << ";";
  }

  const std::vector<double> nbars = {0.5, 2.0, 10.0, 50.0};
  const auto grid = SeparationGrid::uniform(0.0, 20.0, 4001);
  const auto rep = transition_scan(MomentumPD::mandel(1.0), nbars, grid);
  out.detail << " divergence";
  for (std::size_t i = 0; i < rep.series.size(); ++i) {
    const auto& s = rep.series[i];
    out.detail << " " << sci(s.divergence);
    if (i > 0) out.check(s.divergence < rep.series[i - 1].divergence, "divergence not strictly decreasing");
    const double expected = std::exp(-s.nbar);
    out.check(std::abs(s.plateau - expected) <= 1e-6 * expected, "plateau nbar=" + num(s.nbar));
  }
  out.check(rep.series.back().divergence < 0.05, "divergence at nbar=50");
  out.detail << "; plateau rel err at nbar=0.5: "
             << sci(std::abs(rep.series[0].plateau - std::exp(-0.5)) / std::exp(-0.5));
}

void criterion5(Outcome& out) {
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const StableParams sp{alpha, 1.0, 1.0};
    ExponentOptions opts;
    opts.force_quadrature = true;
    const auto quad = build_exponent(stable_triplet(sp), stable_quadrature_spec(), opts);
    // Fit log(-ln|Phi|) = log K + alpha log s on log-spaced separations.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = 16;
    for (int k = 0; k < m; ++k) {
      const double s = std::pow(10.0, -1.0 + 2.0 * k / (m - 1));
      const double y = std::log(-std::log(std::abs(std::exp(quad(s)))));
      const double x = std::log(s);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.check(std::abs(slope - alpha) <= 0.01 * alpha, "alpha fit " + num(alpha));
    out.detail << " alpha=" << alpha << " fit=" << slope << ";";
  }
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto spec = stable_quadrature_spec();
    const double c = calibrate_stable_coefficient(alpha, spec);
    LevyTriplet t;
    t.omega = JumpWeight::power_law(c, alpha);
    ExponentOptions opts;
    opts.force_quadrature = true;
    const auto psi = build_exponent(t, spec, opts);
    double worst = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double closed = -std::pow(s, alpha);
      worst = std::max(worst, std::abs(psi(s) - closed) / std::abs(closed));
    }
    out.check(worst <= 1e-4, "calibrated quadrature alpha=" + num(alpha));
    out.detail << " c(" << alpha << ")=" << c << " rel " << sci(worst) << ";";
  }
  const StableParams s2{2.0, 0.8, 1.7};
  const auto stable2 = stable_exponent(s2);
  const auto from_triplet = build_exponent(stable_triplet(s2), QuadratureSpec{});
  LevyTriplet g;
  g.diffusion_D = 2.0 * s2.K / (s2.x0 * s2.x0);
  const auto gauss = build_exponent(g, QuadratureSpec{});
  bool exact = true;
  for (double s : SeparationGrid::uniform(-10.0, 10.0, 1001).points()) {
    exact = exact && stable2(s) == gauss(s) && from_triplet(s) == gauss(s);
  }
  out.check(exact, "alpha=2 equals the Gaussian exponent");
  out.detail << " alpha=2 exact=" << (exact ? "yes" : "no");
}

void criterion6(Outcome& out) {
  out.check(mandel_cf_unit(0.0) == cplx(1.0, 0.0), "Phi(0) = 1");
  const MandelParams p{1.3, 0.7};
  const auto phi = mandel_cf(p);
  const double target = 3.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  const double err = std::abs(phi(std::numbers::pi / p.k0) - target);
  out.check(err <= 1e-12, "Phi(k0 s = pi)");

  // Moments from the CF by finite differences: <q> = -i hbar Phi'(0), <q^2> = -hbar^2 Phi''(0).
  const std::function<cplx(double)> f = [&](double s) { return phi(s); };
  const double hk = p.photon_momentum();
  const double h = 1e-2 / p.k0;
  const double fd_mean = (cplx(0, -1) * p.hbar * derivative1(f, h)).real();
  const double fd_second = (-p.hbar * p.hbar * derivative2(f, h)).real();
  out.check(std::abs(fd_mean / hk - 1.0) < 1e-8, "finite-difference mean");
  out.check(std::abs(fd_second / (hk * hk) - 1.4) < 1e-8, "finite-difference second moment");

  const MomentumPD pd = mandel_pd(p, mandel_default_pair(p));
  const auto m = table_integrals(pd.table()->q, pd.table()->density);
  const double mean_err = std::abs(m.first - hk) / hk;
  const double second_err = std::abs(m.second - 1.4 * hk * hk) / (hk * hk);
  out.check(mean_err <= 1e-6, "reconstructed mean");
  out.check(second_err <= 1e-6, "reconstructed second moment");
  out.detail << " |Phi(pi)-3/(2pi^2)|=" << sci(err) << " fd mean/hk0=" << fd_mean / hk
             << " fd second/(hk0)^2=" << fd_second / (hk * hk) << " mean err=" << sci(mean_err)
             << " second err=" << sci(second_err);
}

void criterion7(Outcome& out) {
  const auto grid = SeparationGrid::uniform(-10.0, 10.0, 201);
  std::vector<SamplerConfig> configs(2);
  configs[0].process = CompoundPoissonProcess{2.0, MomentumPD::mandel(1.0)};
  configs[1].process = StableProcess{StableParams{1.0, 1.0, 1.0}};
  const char* names[] = {"mandel nbar=2", "stable alpha=1"};
  for (std::size_t c = 0; c < configs.size(); ++c) {
    auto& cfg = configs[c];
    cfg.seed = 424242;
    cfg.sample_count = 1000000;
    cfg.horizon = 1.0;
    cfg.workers = 1;
    const auto samples = sample_total_transfer(cfg);
    const auto emp = empirical_cf(samples, grid);
    const auto cov = compare_with_analytic(emp, analytic_cf(cfg), 3.0);
    out.check(cov.pass_rate >= 0.99, std::string(names[c]) + " coverage");
    auto again = cfg;
    again.workers = 4;
    const bool same = sample_total_transfer(again) == samples && sample_total_transfer(cfg) == samples;
    out.check(same, std::string(names[c]) + " determinism");
    out.detail << " " << names[c] << ": pass rate " << cov.pass_rate << ", deterministic "
               << (same ? "yes" : "no") << ";";
  }
}

void criterion8(Outcome& out) {
  // Kicks far larger than hbar / s on every supported separation.
  const auto near = PathSeparationWeights::uniform(1.0, 2.0, 201);
  const auto far = PathSeparationWeights::uniform(1e7, 2e7, 2001);
  struct Case {
    std::string name;
    MomentumPD pd;
    const PathSeparationWeights* w;
  };
  const std::vector<Case> cases = {{"gaussian sigma=20", MomentumPD::gaussian(0.0, 20.0), &near},
                                   {"mandel", MomentumPD::mandel(1.0), &far}};
  for (const auto& c : cases) {
    for (double lt : {0.5, 1.0, 2.0}) {
      const auto psi = compound_poisson_exponent(1.0, c.pd);
      const double v = visibility([&](double s) { return std::exp(lt * psi(s)); }, *c.w);
      const double err = std::abs(v - std::exp(-lt));
      out.check(err <= 1e-6, c.name + " Lt=" + num(lt));
      out.detail << " " << c.name << " Lt=" << lt << ": " << sci(err) << ";";
    }
  }
}

}  // namespace

int main() {
  int failures = 0;
  failures += run(1, "CF axiom suite over shipped processes", 10.0, criterion1);
  failures += run(2, "jump expansion equals closed form", 5.0, criterion2);
  failures += run(3, "convolution power equals CF power", 5.0, criterion3);
  failures += run(4, "Gaussian-limit tangency and transition", 10.0, criterion4);
  failures += run(5, "stable-law exponent", 10.0, criterion5);
  failures += run(6, "Mandel model", 2.0, criterion6);
  failures += run(7, "Monte Carlo oracle", 60.0, criterion7);
  failures += run(8, "visibility in the strong-kick regime", 2.0, criterion8);
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
