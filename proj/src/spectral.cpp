#include "levydec/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "levydec/errors.hpp"

namespace levydec {

namespace {

constexpr double kSupportTol = 1e-9;
constexpr double kEdgeMassTol = 1e-9;

// fftw planning is not thread-safe; execution on distinct buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n)
      : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data_) throw std::bad_alloc();
  }
  ~FftBuffer() { fftw_free(data_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  cplx get(std::size_t i) const { return {data_[i][0], data_[i][1]}; }
  void set(std::size_t i, cplx v) {
    data_[i][0] = v.real();
    data_[i][1] = v.imag();
  }
  fftw_complex* raw() { return data_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* data_;
};

// In-place transform: sign = FFTW_FORWARD (e^{-2 pi i jk/n}) or FFTW_BACKWARD (e^{+...}).
void transform_in_place(FftBuffer& buf, int sign) {
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), buf.raw(), buf.raw(), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(plan);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double hat_factor(double s, const UniformGridPair& pair) {
  const double v = sinc(0.5 * s * pair.dq() / pair.hbar());
  return v * v;
}

// Integral of the piecewise-linear interpolant of (q, f) over [a, b].
double interpolant_mass_between(std::span<const double> q, std::span<const double> f, double a,
                                double b) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double lo = std::max(a, q[i]);
    const double hi = std::min(b, q[i + 1]);
    if (hi <= lo) continue;
    const double h = q[i + 1] - q[i];
    const double flo = f[i] + (f[i + 1] - f[i]) * (lo - q[i]) / h;
    const double fhi = f[i] + (f[i + 1] - f[i]) * (hi - q[i]) / h;
    total += 0.5 * (flo + fhi) * (hi - lo);
  }
  return total;
}

double interpolate(std::span<const double> q, std::span<const double> f, double x) {
  if (x < q.front() || x > q.back()) return 0.0;
  auto it = std::upper_bound(q.begin(), q.end(), x);
  if (it == q.end()) return f.back();
  const std::size_t i = static_cast<std::size_t>(it - q.begin()) - 1;
  const double t = (x - q[i]) / (q[i + 1] - q[i]);
  return f[i] + t * (f[i + 1] - f[i]);
}

// Weights (A, B) with int_0^1 ((1-t) fa + t fb) e^{i theta t} dt = fa*A + fb*B.
std::pair<cplx, cplx> segment_weights(double theta) {
  const cplx I(0.0, 1.0);
  if (std::abs(theta) < 0.5) {
    // E1 = sum (i theta)^k / (k+1)!,  Et = sum (i theta)^k / (k! (k+2)).
    cplx e1 = 0.0, et = 0.0, term = 1.0;  // term = (i theta)^k / k!
    for (int k = 0; k < 24; ++k) {
      e1 += term / static_cast<double>(k + 1);
      et += term / static_cast<double>(k + 2);
      term *= I * theta / static_cast<double>(k + 1);
    }
    return {e1 - et, et};
  }
  const cplx eith = std::polar(1.0, theta);
  const cplx e1 = (eith - 1.0) / (I * theta);
  const cplx et = eith / (I * theta) - (eith - 1.0) / (I * theta * I * theta);
  return {e1 - et, et};
}

}  // namespace

cplx piecewise_linear_ft(std::span<const double> q, std::span<const double> f, double omega) {
  require(q.size() == f.size() && q.size() >= 2, ErrorCode::InvalidArgument,
          "piecewise_linear_ft needs matching tables of at least two nodes");
  const std::size_t n = q.size();
  const double h0 = (q[n - 1] - q[0]) / static_cast<double>(n - 1);
  bool uniform = n > 16;
  for (std::size_t i = 0; uniform && i + 1 < n; ++i) {
    uniform = std::abs((q[i + 1] - q[i]) - h0) <= 1e-10 * h0;
  }

  if (!uniform) {
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (f[i] == 0.0 && f[i + 1] == 0.0) continue;
      const double h = q[i + 1] - q[i];
      const auto [wa, wb] = segment_weights(omega * h);
      total += h * std::polar(1.0, omega * q[i]) * (f[i] * wa + f[i + 1] * wb);
    }
    return total;
  }

  // Uniform nodes: the interpolant is a sum of tents, each contributing
  // h sinc^2(theta/2) f_k e^{i omega q_k}; the end tents lose their outer half.
  std::size_t first = 0, last = n - 1;
  while (first < last && f[first] == 0.0) ++first;
  while (last > first && f[last] == 0.0) --last;
  const double theta = omega * h0;
  const auto [wa, wb] = segment_weights(theta);
  const double half = 0.5 * theta;
  const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  const cplx step = std::polar(1.0, theta);
  cplx sum = 0.0, phase = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    // Reseed the rotation from the true node position every 64 nodes.
    phase = (k - first) % 64 == 0 ? std::polar(1.0, omega * q[k]) : phase * step;
    sum += f[k] * phase;
  }
  cplx total = h0 * sinc * sinc * sum;
  if (first == 0 && f[0] != 0.0) total -= h0 * f[0] * std::polar(1.0, omega * (q[0] - h0)) * wb;
  if (last == n - 1 && f[n - 1] != 0.0) total -= h0 * f[n - 1] * std::polar(1.0, omega * q[n - 1]) * wa;
  return total;
}

std::vector<double> tabulate(const MomentumPD& pd, const UniformGridPair& pair) {
  const std::size_t n = pair.size();
  const double lo = pair.q_min();
  const double hi = pair.q_max();
  std::vector<double> out(n, 0.0);

  if (const auto* t = std::get_if<TabulatedDensity>(&pd.representation())) {
    const double total = table_integrals(t->q, t->density).mass;
    const double inside = interpolant_mass_between(t->q, t->density, lo, hi);
    require(total - inside <= kSupportTol, ErrorCode::SupportClipped,
            "tabulated density has mass " + std::to_string(total - inside) +
                " outside the momentum window");
    for (std::size_t k = 0; k < n; ++k) out[k] = interpolate(t->q, t->density, pair.q(k));
    return out;
  }
  if (const auto* g = std::get_if<GaussianDensity>(&pd.representation())) {
    const double r2 = std::numbers::sqrt2 * g->sigma;
    const double outside =
        0.5 * std::erfc((g->mean - lo) / r2) + 0.5 * std::erfc((hi - g->mean) / r2);
    require(outside <= kSupportTol, ErrorCode::SupportClipped,
            "Gaussian density extends beyond the momentum window");
    for (std::size_t k = 0; k < n; ++k) out[k] = pd.density(pair.q(k));
    return out;
  }
  const auto [slo, shi] = pd.support();
  require(slo >= lo && shi <= hi, ErrorCode::SupportClipped,
          "density support [" + std::to_string(slo) + ", " + std::to_string(shi) +
              "] exceeds the momentum window");
  if (std::holds_alternative<MandelDensity>(pd.representation())) {
    std::vector<cplx> cf(n);
    for (std::size_t j = 0; j < n; ++j) cf[j] = pd.cf(pair.s(j), pair.hbar());
    InversionOptions opts;
    opts.window_fraction = 0.125;
    return cf_to_density(cf, pair, opts).density;
  }
  for (std::size_t k = 0; k < n; ++k) out[k] = pd.density(pair.q(k));
  return out;
}

std::vector<cplx> density_to_cf(std::span<const double> density, const UniformGridPair& pair) {
  const std::size_t n = pair.size();
  require(density.size() == n, ErrorCode::InvalidArgument,
          "density length does not match the grid pair");
  FftBuffer buf(n);
  for (std::size_t k = 0; k < n; ++k) buf.set(k, (k % 2 == 0 ? 1.0 : -1.0) * density[k]);
  transform_in_place(buf, FFTW_BACKWARD);
  std::vector<cplx> cf(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = pair.s(j);
    cf[j] = pair.dq() * hat_factor(s, pair) * std::polar(1.0, pair.q_min() * s / pair.hbar()) *
            buf.get(j);
  }
  cf[pair.zero_index()] = cf[pair.zero_index()].real();
  return cf;
}

std::vector<cplx> pd_to_cf(const MomentumPD& pd, const UniformGridPair& pair) {
  return density_to_cf(tabulate(pd, pair), pair);
}

InvertedDensity cf_to_density(std::span<const cplx> cf, const UniformGridPair& pair,
                              const InversionOptions& options) {
  const std::size_t n = pair.size();
  require(cf.size() == n, ErrorCode::InvalidArgument, "CF length does not match the grid pair");
  const std::size_t z = pair.zero_index();
  double scale = 0.0;
  for (const auto& v : cf) scale = std::max(scale, std::abs(v));
  for (std::size_t m = 1; m < n / 2; ++m) {
    const double dev = std::abs(cf[z + m] - std::conj(cf[z - m]));
    require(dev <= options.hermitian_tol * std::max(1.0, scale), ErrorCode::NonHermitianInput,
            "CF samples violate Phi(-s) = conj(Phi(s)) at s = " + std::to_string(pair.s(z + m)));
  }

  const double s_c = options.window_fraction * std::numbers::pi * pair.hbar() / pair.dq();
  FftBuffer buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = pair.s(j);
    cplx g = cf[j];
    if (options.window_fraction > 0.0) g *= std::exp(-0.5 * (s / s_c) * (s / s_c));
    if (options.deconvolve_hat) g /= hat_factor(s, pair);
    buf.set(j, g * std::polar(1.0, -pair.q_min() * s / pair.hbar()));
  }
  transform_in_place(buf, FFTW_FORWARD);

  const double pref = pair.ds() / (2.0 * std::numbers::pi * pair.hbar());
  InvertedDensity out;
  out.density.resize(n);
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.density[k] = pref * (k % 2 == 0 ? 1.0 : -1.0) * buf.get(k).real();
    peak = std::max(peak, out.density[k]);
  }
  require(peak > 0.0, ErrorCode::GridTooCoarse, "inverted density has no positive mass");

  const double threshold = options.clip_relative * peak;
  double kept = 0.0;
  for (auto& v : out.density) {
    if (v < threshold) v = 0.0;
    kept += v;
  }
  kept *= pair.dq();
  out.clipped_mass = 1.0 - kept;
  require(std::abs(out.clipped_mass) <= options.max_mass_change, ErrorCode::GridTooCoarse,
          "clipping the inverted density changed its mass by " +
              std::to_string(out.clipped_mass) + "; refine the grid");
  for (auto& v : out.density) v /= kept;
  return out;
}

MomentumPD cf_to_pd(std::span<const cplx> cf, const UniformGridPair& pair,
                    const InversionOptions& options) {
  auto inv = cf_to_density(cf, pair, options);
  return MomentumPD::tabulated(pair.momenta(), std::move(inv.density), true);
}

MomentumPD convolve_power(const MomentumPD& pd, int n, const UniformGridPair& pair) {
  require(n >= 1, ErrorCode::InvalidArgument, "convolution power must be >= 1");
  const auto [slo, shi] = pd.support();
  const double need_lo = std::min(slo, n * slo);
  const double need_hi = std::max(shi, n * shi);
  require(need_lo >= pair.q_min() && need_hi <= pair.q_max(), ErrorCode::WindowTooNarrow,
          "momentum window does not hold the " + std::to_string(n) + "-fold support");

  auto cf = pd_to_cf(pd, pair);
  if (n > 1) {
    for (auto& v : cf) v = std::pow(v, n);
  }
  InversionOptions opts;
  opts.max_mass_change = 1e-7;
  auto inv = cf_to_density(cf, pair, opts);

  const std::size_t edge = std::max<std::size_t>(1, pair.size() / 32);
  double edge_mass = 0.0;
  for (std::size_t k = 0; k < edge; ++k) {
    edge_mass += inv.density[k] + inv.density[pair.size() - 1 - k];
  }
  edge_mass *= pair.dq();
  require(edge_mass <= kEdgeMassTol, ErrorCode::WindowTooNarrow,
          "convolution power leaks " + std::to_string(edge_mass) + " mass to the window edges");
  return MomentumPD::tabulated(pair.momenta(), std::move(inv.density), true);
}

}  // namespace levydec
