#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "levydec/grid.hpp"
#include "levydec/momentum_pd.hpp"
#include "levydec/process_models.hpp"

namespace levydec {

struct CompoundPoissonProcess {
  double rate;
  MomentumPD pd;
};

struct GaussianProcess {
  double drift_a;
  double diffusion_D;
};

struct StableProcess {
  StableParams params;
};

/// Exactly `kicks` independent transfers from `pd` (n-fold convolution).
struct FixedKicks {
  int kicks;
  MomentumPD pd;
};

using SampledProcess = std::variant<CompoundPoissonProcess, GaussianProcess, StableProcess, FixedKicks>;

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t sample_count = 1;
  SampledProcess process = GaussianProcess{0.0, 1.0};
  double horizon = 1.0;
  double hbar = 1.0;
  unsigned workers = 1;
  void validate() const;
};

/// Samples are drawn in fixed blocks of this many indices, each block from
/// its own generator seeded by (seed, block index).
inline constexpr std::size_t kSampleBlock = 4096;

/// Total momentum transferred over the horizon, one entry per sample.
/// Bitwise identical for a given seed regardless of `workers`.
std::vector<double> sample_total_transfer(const SamplerConfig& cfg);

/// Inverse-CDF sampler for a tabulated density (CDF linear between nodes).
class InverseCdfSampler {
 public:
  explicit InverseCdfSampler(const MomentumPD& pd);
  double operator()(double u) const;

 private:
  std::vector<double> q_;
  std::vector<double> cdf_;
};

struct EmpiricalCF {
  SeparationGrid grid;
  std::vector<cplx> values;
  std::vector<double> std_error;  // sqrt((var cos + var sin) / N); +inf when N == 1
  std::size_t sample_count = 0;
};

/// Phi_hat(s) = mean of exp(i Q_k s / hbar).
EmpiricalCF empirical_cf(std::span<const double> samples, const SeparationGrid& grid,
                         double hbar = 1.0, unsigned workers = 1);

struct CoverageSummary {
  std::vector<bool> within;    // |Phi_hat - Phi| <= k SE per point
  std::vector<double> abs_error;
  double pass_rate = 0.0;
};

CoverageSummary compare_with_analytic(const EmpiricalCF& emp, const std::function<cplx(double)>& analytic,
                                      double k_se = 3.0);

/// Analytic Phi(t, s) of a sampled process, for comparison with empirical_cf.
std::function<cplx(double)> analytic_cf(const SamplerConfig& cfg);

void write_samples_csv(std::ostream& out, std::span<const double> samples);
void write_empirical_cf_csv(std::ostream& out, const EmpiricalCF& emp);

}  // namespace levydec
