#pragma once

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "levydec/grid.hpp"
#include "levydec/levy_core.hpp"
#include "levydec/momentum_pd.hpp"
#include "levydec/spectral.hpp"

namespace levydec {

/// Off-diagonal elements <x|rho|y> sampled at s = x - y.
struct OffDiagonalState {
  SeparationGrid grid;
  std::vector<cplx> values;

  /// All-ones coherences on `grid`.
  static OffDiagonalState uniform(const SeparationGrid& grid);
  void validate() const;
};

/// Piecewise-linear rate history Gamma(t) >= 0.
struct RateHistory {
  std::vector<double> t;
  std::vector<double> rate;
};

struct JumpConfig {
  std::variant<double, RateHistory> rate = 1.0;
  double horizon = 0.0;
  /// Highest jump number kept; negative selects ceil(nbar + 10 sqrt(nbar + 1)).
  int truncation = -1;
  double tail_tol = 1e-10;

  /// Effective Poisson mean: Gamma t, or int_0^t Gamma(t') dt'.
  double mean_jumps() const;
  int effective_truncation() const;
  void validate() const;
};

int default_truncation(double nbar);

struct JumpWeights {
  std::vector<double> p;  // p[n] for n = 0..N
  double tail = 0.0;      // mass beyond N
  bool markovian = true;
};

/// Poisson weights p_n = nbar^n e^{-nbar} / n!.  Throws TruncationTooSmall.
JumpWeights poisson_weights(const JumpConfig& cfg);

/// Discretized Gaussian in n (mean nbar, width sigma) over n = 0..N, renormalized.
/// Offered for comparison with experimental fits; not Markovian.
JumpWeights gaussian_jump_weights(double nbar, double sigma, int truncation);

/// values <- exp(t Psi(s)) values.  Throws NegativeTime.
OffDiagonalState evolve_closed_form(const OffDiagonalState& state, const CharacteristicExponent& psi,
                                    double t);

using CfEvaluator = std::function<cplx(double)>;

/// values <- sum_n p_n Phi(s)^n values.
OffDiagonalState jump_expansion_evolve(const OffDiagonalState& state, const CfEvaluator& cf,
                                       const JumpConfig& cfg);
OffDiagonalState jump_expansion_evolve(const OffDiagonalState& state, const CfEvaluator& cf,
                                       const JumpWeights& weights);

/// n applications of the decoherence superoperator: values <- Phi_P(s)^n values.
OffDiagonalState apply_superoperator(const MomentumPD& pd, const OffDiagonalState& state, int n,
                                     double hbar = 1.0);

/// Same map computed from the n-fold convolved density (CF of P * ... * P).
OffDiagonalState apply_superoperator_by_convolution(const MomentumPD& pd, const OffDiagonalState& state,
                                                    int n, const UniformGridPair& pair);

/// Non-negative weights over path separations, unit mass.
struct PathSeparationWeights {
  std::vector<double> s;
  std::vector<double> w;

  static PathSeparationWeights point_mass(double s);
  static PathSeparationWeights uniform(double lo, double hi, std::size_t n);
  /// Throws UnnormalizedWeights unless w >= 0 and sum w = 1 within 1e-9.
  void validate() const;
};

/// V = |sum_i w_i Phi(s_i)|.
double visibility(const CfEvaluator& phi, const PathSeparationWeights& weights);
double visibility(const DecoherenceFactor& phi, const PathSeparationWeights& weights);

struct TransitionSeries {
  double nbar;
  std::vector<double> abs_cf_compound;
  std::vector<double> abs_cf_gaussian;
  double divergence;     // max ||Phi_CP| - |Phi_G|| where |Phi_CP| > 0.1
  double plateau;        // |Phi_CP| far beyond the CF decay scale
  double plateau_s;      // separation where the plateau was read
};

struct TransitionReport {
  SeparationGrid grid;
  std::vector<TransitionSeries> series;
  double hbar = 1.0;
  std::string pd_kind;
};

/// Compound-Poisson vs. Gaussian-limit moduli for each nbar.
/// Throws InfiniteMoment; InvalidArgument for an empty list or negative nbar.
TransitionReport transition_scan(const MomentumPD& pd, const std::vector<double>& nbar_list,
                                 const SeparationGrid& grid, double hbar = 1.0, unsigned workers = 1);

}  // namespace levydec
