#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace levydec {

using cplx = std::complex<double>;

/// Density tabulated on strictly increasing nodes, linear in between and zero
/// outside [q.front(), q.back()].
struct TabulatedDensity {
  std::vector<double> q;
  std::vector<double> density;
};

struct GaussianDensity {
  double mean;
  double sigma;
};

/// Single-photon recoil distribution along the laser axis, known through its
/// characteristic function; `hbar_k0` is the photon momentum.
struct MandelDensity {
  double hbar_k0;
};

struct CustomDensity {
  std::function<double(double)> density;
  double lo;
  double hi;
  /// Optional closed-form characteristic function in the momentum variable
  /// conjugate to s/hbar; falls back to quadrature when empty.
  std::function<cplx(double)> cf;
};

struct Moments {
  double mean;
  double second;
};

/// Normalized probability density of a single momentum transfer q.
class MomentumPD {
 public:
  using Representation = std::variant<TabulatedDensity, GaussianDensity, MandelDensity, CustomDensity>;

  /// Tabulated density; negative or non-finite values are rejected.  When
  /// `normalize` is set the table is rescaled to unit mass, otherwise the
  /// mass must already be 1 within 1e-9.
  static MomentumPD tabulated(std::vector<double> q, std::vector<double> density,
                              bool normalize = true);
  static MomentumPD gaussian(double mean, double sigma);
  static MomentumPD mandel(double hbar_k0);
  /// Custom density on [lo, hi]; assumed normalized.
  static MomentumPD custom(std::function<double(double)> density, double lo, double hi,
                           std::function<cplx(double)> cf = {});

  const Representation& representation() const { return rep_; }
  std::string kind_name() const;
  bool is_tabulated() const { return std::holds_alternative<TabulatedDensity>(rep_); }
  const TabulatedDensity* table() const { return std::get_if<TabulatedDensity>(&rep_); }

  /// Interval outside which the density is zero (Gaussian: mean +- 12 sigma).
  std::pair<double, double> support() const;

  /// Pointwise density.  Not available for the Mandel tag, whose density is
  /// only ever reconstructed from its characteristic function.
  double density(double q) const;

  /// Phi(s) = integral of P(q) exp(i q s / hbar) dq.
  cplx cf(double s, double hbar = 1.0) const;

  /// First and second moments when known at construction time.  Tabulated
  /// densities whose table edges look like a truncated power-law tail
  /// leave these empty (see pd_moments).
  const std::optional<Moments>& cached_moments() const { return moments_; }

 private:
  explicit MomentumPD(Representation rep) : rep_(std::move(rep)) {}

  Representation rep_;
  std::optional<Moments> moments_;
};

/// (3/2) e^{iu} { sinc u + (cos u - sinc u)/u^2 }, with a Taylor branch near
/// the removable singularity at u = 0.
cplx mandel_cf_unit(double u);

/// Mass and first two moments of a piecewise-linear density.
struct TableIntegrals {
  double mass;
  double first;
  double second;
};
TableIntegrals table_integrals(const std::vector<double>& q, const std::vector<double>& f);

/// Which moments of a tabulated density appear infinite from a power-law fit
/// over the last decade of each table edge: 0 = none, 1 = first (and second),
/// 2 = second only.
int heavy_tail_order(const std::vector<double>& q, const std::vector<double>& f);

/// True when an edge of the table looks like a tail decaying no faster than
/// 1/|q|, so that the untruncated function would not be integrable.
bool tail_nonintegrable(const std::vector<double>& q, const std::vector<double>& f);

}  // namespace levydec
