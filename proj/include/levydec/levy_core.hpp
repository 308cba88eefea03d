#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levydec/errors.hpp"
#include "levydec/grid.hpp"
#include "levydec/momentum_pd.hpp"
#include "levydec/spectral.hpp"

namespace levydec {

/// |amplitude(q)|^2 = coefficient * |q|^(-alpha-1), amplitude real and even.
struct PowerLawMeasure {
  double coefficient;
  double alpha;
};

/// Complex jump amplitude over momentum transfer (lambda(q) or omega(q)).
class JumpWeight {
 public:
  JumpWeight() = default;

  static JumpWeight zero() { return {}; }
  static JumpWeight amplitude(std::function<cplx(double)> amp);
  /// Weight given directly as |amplitude|^2 >= 0; the amplitude is its square root.
  static JumpWeight squared(std::function<double(double)> weight_sq);
  /// |amplitude|^2 tabulated and linear between nodes, zero outside.
  static JumpWeight tabulated_squared(std::vector<double> q, std::vector<double> weight_sq);
  static JumpWeight power_law(double coefficient, double alpha);

  bool is_zero() const { return !amp_ && !sq_; }
  cplx value(double q) const;
  double squared_value(double q) const;
  const std::optional<PowerLawMeasure>& power_law() const { return power_law_; }
  /// Non-empty for tabulated weights.
  const std::optional<TabulatedDensity>& table() const { return table_; }

 private:
  std::function<cplx(double)> amp_;
  std::function<double(double)> sq_;
  std::optional<PowerLawMeasure> power_law_;
  std::optional<TabulatedDensity> table_;
};

/// Drift, diffusion and jump weights of a translation-invariant generator.
struct LevyTriplet {
  double drift_a = 0.0;       // 1/(length time)
  double diffusion_D = 0.0;   // 1/(length^2 time)
  JumpWeight lambda;          // plain Poisson part
  JumpWeight omega;           // compensated part, may be singular at q = 0
  double q0 = 1.0;            // compensator scale
  double hbar = 1.0;

  /// Checks the scalar invariants; the integrability conditions are checked by
  /// build_exponent.
  void validate() const;
};

struct ExponentTerms {
  bool drift = false;
  bool diffusion = false;
  bool lambda = false;
  bool cross = false;
  bool omega = false;
};

/// Psi(s): the decoherence rate profile over separation s = x - y.
class CharacteristicExponent {
 public:
  using Evaluator = std::function<cplx(double)>;

  CharacteristicExponent(Evaluator eval, ExponentTerms terms, bool closed_form,
                         std::string description);

  cplx operator()(double s) const { return eval_(s); }
  const ExponentTerms& terms() const { return terms_; }
  bool closed_form() const { return closed_form_; }
  const std::string& description() const { return description_; }
  /// Default audit tolerance: 1e-9 for closed forms, 1e-6 for numerical routes.
  double audit_tolerance() const { return closed_form_ ? 1e-9 : 1e-6; }

 private:
  Evaluator eval_;
  ExponentTerms terms_;
  bool closed_form_;
  std::string description_;
};

struct ExponentOptions {
  /// Skip the closed-form dispatch and integrate the jump terms numerically.
  bool force_quadrature = false;
};

/// Assembles Psi(s) = -i a s - D s^2/2 + int |lambda|^2 (e^{iqs/hbar} - 1)
///   + 2 int Re(omega lambda*) (e^{iqs/hbar} - 1)
///   + int |omega|^2 (e^{iqs/hbar} - 1 - (i/hbar) q s / (1 + q^2/q0^2)).
/// Pure Gaussian and power-law (stable) triplets use closed forms.  Throws
/// LevyConditionViolated; evaluation may throw QuadratureNotConverged.
CharacteristicExponent build_exponent(const LevyTriplet& triplet, const QuadratureSpec& quad,
                                      const ExponentOptions& options = {});

/// 2 Gamma(1-alpha) cos(pi alpha/2) / alpha (pi at alpha = 1): the value of
/// int (1 - cos u) |u|^(-alpha-1) du over the real line, alpha in (0, 2).
double stable_measure_constant(double alpha);

struct LevyConditionReport {
  bool satisfied = false;
  double integral = 0.0;        // partial sum over the probed windows
  double small_q_ratio = 0.0;   // geometric decay ratio of the q -> 0 windows
  double large_q_ratio = 0.0;   // same toward q -> infinity
  std::string detail;
};

/// Heuristic test of int w(q) q^2/(1+q^2) dq < inf: the integral is split on
/// dyadic windows [2^-k-1, 2^-k] and [2^k, 2^k+1] (both signs) and each tail
/// must decay geometrically (window ratio below 0.97).  With `moment_weight`
/// false the q^2/(1+q^2) factor is dropped, testing plain integrability.
LevyConditionReport levy_condition_check(const std::function<double(double)>& weight_sq,
                                         bool moment_weight = true);

std::vector<cplx> eval_exponent(const CharacteristicExponent& psi, const SeparationGrid& grid,
                                unsigned workers = 1);

/// Phi(t, s) sampled on a grid.
struct DecoherenceFactor {
  double t = 0.0;
  SeparationGrid grid;
  std::vector<cplx> values;
  bool closed_form = true;
};

/// Phi(t, s) = exp(t Psi(s)).  Throws NegativeTime.
DecoherenceFactor cf_at_time(const CharacteristicExponent& psi, double t, const SeparationGrid& grid,
                             unsigned workers = 1);

enum class Axiom { Normalization, Modulus, Hermitian, PositiveDefinite };
std::string axiom_name(Axiom a);

struct AxiomCheck {
  Axiom axiom;
  bool passed;
  double worst;                  // largest violation measure seen
  std::vector<double> witness;   // separations exhibiting the worst case
};

struct AuditReport {
  bool passed = true;
  double tolerance = 0.0;
  int probes_run = 0;
  int probes_skipped = 0;
  std::vector<AxiomCheck> checks;
};

class AuditFailed : public Error {
 public:
  AuditFailed(AuditReport report, Axiom axiom, const std::string& message)
      : Error(ErrorCode::AuditFailed, message), report_(std::move(report)), axiom_(axiom) {}
  const AuditReport& report() const { return report_; }
  Axiom axiom() const { return axiom_; }
  const std::vector<double>& witness() const;

 private:
  AuditReport report_;
  Axiom axiom_;
};

struct AuditOptions {
  /// Defaults to 1e-9 for closed-form factors and 1e-6 otherwise.
  std::optional<double> tolerance;
  std::size_t subset_size = 12;
};

/// Checks |Phi| <= 1, Phi(0) = 1, Phi(-s) = conj Phi(s) and positive
/// semidefiniteness of Gram matrices [Phi(s_i - s_j)] on `probe_count`
/// random subsets.  Needs a grid containing 0 and symmetric points.  Throws
/// AuditFailed naming the first violated axiom.
AuditReport cf_property_audit(const DecoherenceFactor& phi, int probe_count, std::uint64_t seed,
                              const AuditOptions& options = {});

}  // namespace levydec
