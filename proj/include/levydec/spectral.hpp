#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "levydec/grid.hpp"
#include "levydec/momentum_pd.hpp"

namespace levydec {

// Fourier convention shared by every module: Phi(s) = int P(q) e^{i q s / hbar} dq.

/// Exact transform of the piecewise-linear interpolant of (q, f), taken as
/// zero outside [q.front(), q.back()], at angular frequency `omega` (= s/hbar).
cplx piecewise_linear_ft(std::span<const double> q, std::span<const double> f, double omega);

/// Samples of `pd` at the momentum nodes of `pair`.  Throws SupportClipped if
/// more than 1e-9 of the mass falls outside the window.
std::vector<double> tabulate(const MomentumPD& pd, const UniformGridPair& pair);

/// CF of a density sampled on the momentum grid of `pair`, evaluated on the
/// conjugate separation grid.  The hat-function factor sinc^2(s dq / 2 hbar)
/// makes the result the exact transform of the piecewise-linear interpolant.
std::vector<cplx> density_to_cf(std::span<const double> density, const UniformGridPair& pair);

/// pd_to_cf for any density representation (tabulated first).
std::vector<cplx> pd_to_cf(const MomentumPD& pd, const UniformGridPair& pair);

struct InversionOptions {
  /// Gaussian spectral window exp(-(s/s_c)^2/2) with s_c = fraction * pi*hbar/dq;
  /// 0 disables the window.  A window suppresses Gibbs ringing from
  /// discontinuous densities at the cost of a variance shift of hbar^2/s_c^2.
  double window_fraction = 0.0;
  /// Undo the hat-function factor applied by density_to_cf.
  bool deconvolve_hat = true;
  /// Nodes below clip_relative * max(density) are set to zero.
  double clip_relative = 1e-8;
  /// GridTooCoarse when clipping moves more mass than this.
  double max_mass_change = 1e-6;
  /// NonHermitianInput when |Phi(-s) - conj Phi(s)| exceeds this.
  double hermitian_tol = 1e-9;
};

struct InvertedDensity {
  std::vector<double> density;  // on pair.momenta(), unit mass
  double clipped_mass;          // mass removed (negative: mass added) by clipping
};

/// Inverse of density_to_cf.  `cf` holds samples on pair.separations().
InvertedDensity cf_to_density(std::span<const cplx> cf, const UniformGridPair& pair,
                              const InversionOptions& options = {});

/// cf_to_density wrapped as a tabulated MomentumPD on pair.momenta().
MomentumPD cf_to_pd(std::span<const cplx> cf, const UniformGridPair& pair,
                    const InversionOptions& options = {});

/// n-fold self-convolution computed as CF power followed by inversion.
/// Throws WindowTooNarrow when the n-fold support does not fit the window or
/// when more than 1e-9 of the mass lands in the outer 1/32 of either edge.
MomentumPD convolve_power(const MomentumPD& pd, int n, const UniformGridPair& pair);

/// Discretization controls for jump integrals over momentum.
struct QuadratureSpec {
  double q_min = -1.0;
  double q_max = 1.0;
  int base_panels = 32;
  int max_refinements = 8;
  /// Points (typically q = 0) where the weight may be singular; panels are
  /// graded geometrically toward them.
  std::vector<double> singularities;
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  /// When set, the weight is integrated beyond the window as well, with
  /// double-exponential rules for the oscillatory and monotone tail pieces.
  bool infinite_tails = false;

  void validate() const;
};

using RealWeight = std::function<double(double)>;

/// int w(q) [e^{iqs/hbar} - 1 - comp(q)] dq, where comp = i (q s/hbar)/(1 + q^2/q0^2)
/// when `compensated` is set and zero otherwise.  Throws QuadratureNotConverged.
cplx jump_integral(const RealWeight& weight, double s, bool compensated, double q0,
                   const QuadratureSpec& spec, double hbar = 1.0);

/// Plain real integral of f over [a, b] with the same panel refinement
/// (used for normalizations and the Levy-condition windows).
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec);

}  // namespace levydec
