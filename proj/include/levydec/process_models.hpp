#pragma once

#include <functional>
#include <vector>

#include "levydec/levy_core.hpp"
#include "levydec/momentum_pd.hpp"
#include "levydec/spectral.hpp"
#include "levydec/table_io.hpp"

namespace levydec {

/// Collision kernel w(q) >= 0, proportional to (2 pi)^4 hbar^2 |t(q)|^2 S(q, E)
/// and already reduced to the separation axis.
struct GasKernel {
  std::vector<double> q;
  std::vector<double> w;
  double density_n = 1.0;   // gas density
  double mass_M = 1.0;      // test-particle mass
  double momentum_p0 = 1.0; // incoming momentum

  static GasKernel from_table(const Table& t, double n, double M, double p0);
};

struct GasNormalization {
  double rate;           // Lambda = n int w dq
  double cross_section;  // sigma = (M / p0) int w dq
  MomentumPD pd;         // w / int w dq
};

/// Throws ZeroKernel or NonIntegrableKernel.  Lambda does not depend on p0:
/// it cancels between sigma and the flux factor.
GasNormalization normalize_gas_kernel(const GasKernel& kernel);

/// 1D marginal along the separation axis of an isotropic 3D kernel w3(|k|):
/// m(q) = 2 pi int_{|q|}^inf w3(r) r dr, tabulated on `q_nodes`.
std::vector<double> marginalize_isotropic(const std::function<double(double)>& radial,
                                          const std::vector<double>& q_nodes, double r_max);

/// Uniform density on [lo, hi] with its closed-form CF.
MomentumPD uniform_pd(double lo, double hi);

/// Psi(s) = Lambda (Phi_P(s) - 1).
CharacteristicExponent compound_poisson_exponent(double rate, const MomentumPD& pd, double hbar = 1.0);

/// Same process written as a triplet with |lambda(q)|^2 = Lambda P(q).
LevyTriplet compound_poisson_triplet(double rate, const MomentumPD& pd, double hbar = 1.0);

/// <q> and <q^2>.  Throws InfiniteMoment when a tabulated density ends in a
/// power-law tail too heavy for the second moment.
Moments pd_moments(const MomentumPD& pd);

/// Second-order expansion Psi_G(s) = Lambda (i <q> s/hbar - <q^2> s^2 / (2 hbar^2)).
CharacteristicExponent gaussian_limit(double rate, const MomentumPD& pd, double hbar = 1.0);

/// Same expansion as a triplet: a = -Lambda <q>/hbar, D = Lambda <q^2>/hbar^2.
LevyTriplet gaussian_limit_triplet(double rate, const MomentumPD& pd, double hbar = 1.0);

struct StableParams {
  double alpha;
  double K;
  double x0;

  void validate() const;  // AlphaOutOfRange / InvalidArgument
};

/// Psi(s) = -K |s/x0|^alpha.
CharacteristicExponent stable_exponent(const StableParams& p);

/// Coefficient c_alpha with int (cos(q s) - 1) c_alpha |q|^(-alpha-1) dq = -|s|^alpha.
double stable_levy_coefficient(double alpha);

/// Triplet reproducing the stable exponent: |omega(q)|^2 = K (hbar/x0)^alpha c_alpha |q|^(-alpha-1)
/// for alpha < 2, pure diffusion D = 2K/x0^2 at alpha = 2.
LevyTriplet stable_triplet(const StableParams& p, double hbar = 1.0);

/// Quadrature settings for power-law measures (graded toward q = 0, with tails).
QuadratureSpec stable_quadrature_spec(double window = 8.0);

/// Solves for c_alpha numerically: c = -1 / J(1) with J the compensated jump
/// integral of |q|^(-alpha-1) at s = 1.
double calibrate_stable_coefficient(double alpha, const QuadratureSpec& spec);

struct MandelParams {
  double k0 = 1.0;
  double hbar = 1.0;

  void validate() const;
  double photon_momentum() const { return hbar * k0; }
};

/// Closed-form single-photon recoil CF Phi_M(s).
std::function<cplx(double)> mandel_cf(const MandelParams& p);

/// Default pair for the Mandel density: window [-3, 5) hbar k0 with 2^17 nodes.
UniformGridPair mandel_default_pair(const MandelParams& p);

/// Mandel density reconstructed by inverting mandel_cf on `pair` with a
/// Gaussian spectral window (fraction 1/8 of the Nyquist separation).
/// Throws GridTooCoarse if clipping changes the mass by more than 1e-6.
MomentumPD mandel_pd(const MandelParams& p, const UniformGridPair& pair);

}  // namespace levydec
