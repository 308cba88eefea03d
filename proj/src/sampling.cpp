#include "levydec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "levydec/errors.hpp"

namespace levydec {

namespace {

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v = u(rng);
  while (v == 0.0) v = u(rng);
  return v;
}

double chambers_mallows_stuck(double alpha, std::mt19937_64& rng) {
  const double v = std::numbers::pi * (open_uniform(rng) - 0.5);
  const double w = -std::log(open_uniform(rng));
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

MomentumPD sampling_table(const MomentumPD& pd) {
  if (pd.is_tabulated()) return pd;
  if (const auto* m = std::get_if<MandelDensity>(&pd.representation())) {
    const MandelParams params{m->hbar_k0, 1.0};
    return mandel_pd(params, mandel_default_pair(params));
  }
  const auto [lo, hi] = pd.support();
  const std::size_t n = 8193;
  std::vector<double> q(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    f[i] = pd.density(q[i]);
  }
  return MomentumPD::tabulated(std::move(q), std::move(f), true);
}

}  // namespace

void SamplerConfig::validate() const {
  require(sample_count >= 1, ErrorCode::InvalidArgument, "sample count must be >= 1");
  require(horizon >= 0.0 && std::isfinite(horizon), ErrorCode::NegativeTime, "horizon must be >= 0");
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be > 0");
  if (const auto* cp = std::get_if<CompoundPoissonProcess>(&process)) {
    require(cp->rate >= 0.0 && std::isfinite(cp->rate), ErrorCode::InvalidArgument, "rate must be >= 0");
  } else if (const auto* g = std::get_if<GaussianProcess>(&process)) {
    require(g->diffusion_D >= 0.0, ErrorCode::InvalidArgument, "diffusion must be >= 0");
  } else if (const auto* st = std::get_if<StableProcess>(&process)) {
    st->params.validate();
  } else {
    require(std::get<FixedKicks>(process).kicks >= 0, ErrorCode::InvalidArgument,
            "kick count must be >= 0");
  }
}

InverseCdfSampler::InverseCdfSampler(const MomentumPD& pd) {
  const auto* tab = pd.table();
  require(tab != nullptr, ErrorCode::InvalidArgument, "inverse-CDF sampling needs a tabulated density");
  q_ = tab->q;
  cdf_.resize(q_.size());
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < q_.size(); ++i) {
    cdf_[i] = cdf_[i - 1] + 0.5 * (tab->density[i] + tab->density[i - 1]) * (q_[i] - q_[i - 1]);
  }
  const double total = cdf_.back();
  for (auto& c : cdf_) c /= total;
}

double InverseCdfSampler::operator()(double u) const {
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return q_.front();
  if (it == cdf_.end()) return q_.back();
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  const double t = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
  return q_[i - 1] + t * (q_[i] - q_[i - 1]);
}

std::vector<double> sample_total_transfer(const SamplerConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.sample_count;
  std::vector<double> out(n, 0.0);
  const double t = cfg.horizon;
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;

  std::function<double(std::mt19937_64&)> draw;
  std::optional<InverseCdfSampler> inverse;
  std::optional<GaussianDensity> gauss_kick;

  auto kick_sampler = [&](const MomentumPD& pd) -> std::function<double(std::mt19937_64&)> {
    if (const auto* g = std::get_if<GaussianDensity>(&pd.representation())) {
      gauss_kick = *g;
      return [g = *g](std::mt19937_64& rng) {
        std::normal_distribution<double> nd(g.mean, g.sigma);
        return nd(rng);
      };
    }
    inverse.emplace(sampling_table(pd));
    return [&inv = *inverse](std::mt19937_64& rng) { return inv(open_uniform(rng)); };
  };

  if (const auto* cp = std::get_if<CompoundPoissonProcess>(&cfg.process)) {
    const double mean = cp->rate * t;
    if (mean == 0.0) return out;
    auto kick = kick_sampler(cp->pd);
    draw = [mean, kick](std::mt19937_64& rng) {
      std::poisson_distribution<long> count(mean);
      const long k = count(rng);
      double total = 0.0;
      for (long j = 0; j < k; ++j) total += kick(rng);
      return total;
    };
  } else if (const auto* fk = std::get_if<FixedKicks>(&cfg.process)) {
    if (fk->kicks == 0) return out;
    auto kick = kick_sampler(fk->pd);
    const int kicks = fk->kicks;
    draw = [kicks, kick](std::mt19937_64& rng) {
      double total = 0.0;
      for (int j = 0; j < kicks; ++j) total += kick(rng);
      return total;
    };
  } else if (const auto* g = std::get_if<GaussianProcess>(&cfg.process)) {
    // CF exp(t(-i a s - D s^2/2)) in the variable s/hbar.
    const double mean = -g->drift_a * cfg.hbar * t;
    const double sd = std::sqrt(g->diffusion_D * t) * cfg.hbar;
    if (sd == 0.0) {
      std::fill(out.begin(), out.end(), mean);
      return out;
    }
    draw = [mean, sd](std::mt19937_64& rng) {
      std::normal_distribution<double> nd(mean, sd);
      return nd(rng);
    };
  } else {
    const auto& p = std::get<StableProcess>(cfg.process).params;
    if (t == 0.0) return out;
    // X from CMS has CF exp(-|u|^alpha); Q = hbar (K t)^{1/alpha} X / x0.
    const double scale = cfg.hbar * std::pow(p.K * t, 1.0 / p.alpha) / p.x0;
    const double alpha = p.alpha;
    draw = [scale, alpha](std::mt19937_64& rng) { return scale * chambers_mallows_stuck(alpha, rng); };
  }

  parallel_for(blocks, cfg.workers, [&](std::size_t b) {
    auto rng = block_engine(cfg.seed, b);
    const std::size_t lo = b * kSampleBlock;
    const std::size_t hi = std::min(n, lo + kSampleBlock);
    for (std::size_t i = lo; i < hi; ++i) out[i] = draw(rng);
  });
  return out;
}

EmpiricalCF empirical_cf(std::span<const double> samples, const SeparationGrid& grid, double hbar,
                         unsigned workers) {
  require(!samples.empty(), ErrorCode::InvalidArgument, "empirical CF needs at least one sample");
  require(hbar > 0.0, ErrorCode::InvalidArgument, "hbar must be > 0");
  EmpiricalCF emp;
  emp.grid = grid;
  emp.sample_count = samples.size();
  emp.values.resize(grid.size());
  emp.std_error.resize(grid.size());
  const double n = static_cast<double>(samples.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const double omega = grid[i] / hbar;
    double sc = 0.0, ss = 0.0, scc = 0.0, sss = 0.0;
    for (double q : samples) {
      const double c = std::cos(omega * q);
      const double s = std::sin(omega * q);
      sc += c;
      ss += s;
      scc += c * c;
      sss += s * s;
    }
    const double mc = sc / n;
    const double ms = ss / n;
    emp.values[i] = {mc, ms};
    if (samples.size() < 2) {
      emp.std_error[i] = std::numeric_limits<double>::infinity();
    } else {
      const double vc = std::max(0.0, (scc - n * mc * mc) / (n - 1.0));
      const double vs = std::max(0.0, (sss - n * ms * ms) / (n - 1.0));
      emp.std_error[i] = std::sqrt((vc + vs) / n);
    }
  });
  return emp;
}

CoverageSummary compare_with_analytic(const EmpiricalCF& emp, const std::function<cplx(double)>& analytic,
                                      double k_se) {
  CoverageSummary out;
  out.within.resize(emp.grid.size());
  out.abs_error.resize(emp.grid.size());
  std::size_t pass = 0;
  for (std::size_t i = 0; i < emp.grid.size(); ++i) {
    out.abs_error[i] = std::abs(emp.values[i] - analytic(emp.grid[i]));
    out.within[i] = std::isfinite(emp.std_error[i]) && out.abs_error[i] <= k_se * emp.std_error[i] + 1e-14;
    pass += out.within[i] ? 1 : 0;
  }
  out.pass_rate = static_cast<double>(pass) / static_cast<double>(emp.grid.size());
  return out;
}

std::function<cplx(double)> analytic_cf(const SamplerConfig& cfg) {
  const double t = cfg.horizon;
  const double hbar = cfg.hbar;
  if (const auto* cp = std::get_if<CompoundPoissonProcess>(&cfg.process)) {
    const double mean = cp->rate * t;
    const MomentumPD pd = cp->pd;
    return [mean, pd, hbar](double s) { return std::exp(mean * (pd.cf(s, hbar) - 1.0)); };
  }
  if (const auto* fk = std::get_if<FixedKicks>(&cfg.process)) {
    const MomentumPD pd = fk->pd;
    const int kicks = fk->kicks;
    return [pd, kicks, hbar](double s) {
      cplx acc = 1.0;
      const cplx phi = pd.cf(s, hbar);
      for (int j = 0; j < kicks; ++j) acc *= phi;
      return acc;
    };
  }
  if (const auto* g = std::get_if<GaussianProcess>(&cfg.process)) {
    const double a = g->drift_a, D = g->diffusion_D;
    return [a, D, t](double s) { return std::exp(t * cplx(-0.5 * D * s * s, -a * s)); };
  }
  const auto p = std::get<StableProcess>(cfg.process).params;
  return [p, t](double s) { return cplx(std::exp(-p.K * t * std::pow(std::abs(s / p.x0), p.alpha)), 0.0); };
}

void write_samples_csv(std::ostream& out, std::span<const double> samples) {
  out << "index,total_transfer\n" << std::setprecision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << samples[i] << '\n';
}

void write_empirical_cf_csv(std::ostream& out, const EmpiricalCF& emp) {
  out << "s,re_empirical,im_empirical,std_error\n" << std::setprecision(17);
  for (std::size_t i = 0; i < emp.grid.size(); ++i) {
    out << emp.grid[i] << ',' << emp.values[i].real() << ',' << emp.values[i].imag() << ','
        << emp.std_error[i] << '\n';
  }
}

}  // namespace levydec
