#include <cmath>
#include <numbers>
#include <random>

#include "levydec/process_models.hpp"
#include "levydec/spectral.hpp"
#include "support.hpp"

using namespace levydec;
using namespace testing_support;

namespace {

// Segment-by-segment transform with a different quadrature: 8-point
// Gauss-Legendre on each segment (exact up to the oscillation error).
cplx brute_ft(const std::vector<double>& q, const std::vector<double>& f, double omega) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  cplx total = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double c = 0.5 * (q[i] + q[i + 1]), h = 0.5 * (q[i + 1] - q[i]);
    for (int k = 0; k < 4; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        const double t = c + sgn * h * x[k];
        const double v = f[i] + (f[i + 1] - f[i]) * (t - q[i]) / (q[i + 1] - q[i]);
        total += h * w[k] * v * std::polar(1.0, omega * t);
      }
    }
  }
  return total;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("piecewise-linear transform of a triangle") {
    // Unit triangle on [-1, 1]: CF = sinc^2(omega/2).
    const std::vector<double> q{-1.0, 0.0, 1.0}, f{0.0, 1.0, 0.0};
    for (double w : {0.0, 1e-7, 0.3, 1.0, 7.5, 40.0}) {
      const double half = 0.5 * w;
      const double expected = w == 0.0 ? 1.0 : std::pow(std::sin(half) / half, 2);
      CHECK(std::abs(piecewise_linear_ft(q, f, w) - expected) <= 1e-14);
    }
  }

  TEST_CASE("uniform-node fast path agrees with segment quadrature") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> q(300), f(300);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] = -1.3 + 0.01 * static_cast<double>(i);
      f[i] = u(rng);  // non-zero at both ends
    }
    for (double w : {0.0, 0.2, 3.0, 17.0, 250.0}) {
      CHECK(std::abs(piecewise_linear_ft(q, f, w) - brute_ft(q, f, w)) <= 1e-11);
    }
    // Non-uniform nodes take the general route; reference from 30-digit quadrature.
    std::vector<double> qn{0.0, 0.1, 0.5, 0.6, 2.0}, fn{1.0, 2.0, 0.5, 0.0, 1.0};
    const cplx ref(0.632653695344308617401006318661, 0.077679735196514949228922700146);
    CHECK(std::abs(piecewise_linear_ft(qn, fn, 3.3) - ref) <= 1e-14);
  }

  TEST_CASE("FFT transform equals the direct transform on the grid") {
    const auto pair = UniformGridPair::covering(-6.0, 6.0, 1 << 12);
    const auto pd = MomentumPD::gaussian(0.4, 0.7);
    const auto dens = tabulate(pd, pair);
    const auto cf = density_to_cf(dens, pair);
    const auto q = pair.momenta();
    const std::vector<double> f(dens.begin(), dens.end());
    double worst = 0.0;
    for (std::size_t j = 0; j < pair.size(); j += 37) {
      worst = std::max(worst, std::abs(cf[j] - piecewise_linear_ft(q, f, pair.s(j))));
    }
    CHECK(worst <= 1e-12);
    CHECK(cf[pair.zero_index()].imag() == 0.0);
  }

  TEST_CASE("round trip density -> CF -> density") {
    const auto pair = UniformGridPair::covering(-6.0, 6.0, 1 << 12);
    const auto dens = tabulate(MomentumPD::gaussian(-0.5, 0.9), pair);
    const auto cf = density_to_cf(dens, pair);
    const auto back = cf_to_density(cf, pair);
    double worst = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < dens.size(); ++k) {
      worst = std::max(worst, std::abs(back.density[k] - dens[k]));
      peak = std::max(peak, dens[k]);
    }
    CHECK(worst <= 1e-12 * peak + 1e-8 * peak);  // clipping of the far tails
    CHECK(std::abs(back.clipped_mass) <= 1e-6);
  }

  TEST_CASE("Mandel reconstruction matches the analytic density") {
    const MandelParams p{1.0, 1.0};
    const auto pair = mandel_default_pair(p);
    const auto pd = mandel_pd(p, pair);
    const auto* t = pd.table();
    REQUIRE(t != nullptr);
    double worst = 0.0;
    for (std::size_t k = 0; k < t->q.size(); k += 7) {
      const double q = t->q[k];
      if (std::abs(q) < 0.01 || std::abs(q - 2.0) < 0.01) continue;  // smoothed edges
      worst = std::max(worst, std::abs(t->density[k] - mandel_density_unit(q)));
    }
    CHECK(worst <= 1e-6);
    const auto m = table_integrals(t->q, t->density);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m.first - 1.0) <= 1e-6);
    CHECK(std::abs(m.second - 1.4) <= 1e-6);
  }

  TEST_CASE("naive Mandel inversion rings") {
    const MandelParams p{1.0, 1.0};
    const auto pair = mandel_default_pair(p);
    std::vector<cplx> cf(pair.size());
    const auto phi = mandel_cf(p);
    for (std::size_t j = 0; j < pair.size(); ++j) cf[j] = phi(pair.s(j));
    InversionOptions opts;  // no spectral window
    CHECK(error_code([&] { cf_to_density(cf, pair, opts); }) == ErrorCode::GridTooCoarse);
  }

  TEST_CASE("convolution of uniform densities gives the Irwin-Hall density") {
    const auto pair = UniformGridPair::covering(-1.0, 7.0, 1 << 16);
    const double dq = pair.dq();
    const auto box = MomentumPD::tabulated({-dq, 0.0, 1.0, 1.0 + dq}, {0.0, 1.0, 1.0, 0.0});
    const auto tri = convolve_power(box, 2, pair);
    for (double q : {0.25, 0.5, 1.0, 1.5, 1.75}) {
      const double expected = q <= 1.0 ? q : 2.0 - q;
      CHECK(std::abs(tri.density(q) - expected) <= 1e-3);
    }
    const auto three = convolve_power(box, 3, pair);
    CHECK(std::abs(three.density(1.5) - 0.75) <= 1e-3);
  }

  TEST_CASE("spectral error paths") {
    const auto pair = UniformGridPair::covering(-2.0, 2.0, 1 << 10);
    CHECK(error_code([&] { tabulate(MomentumPD::gaussian(0.0, 1.0), pair); }) == ErrorCode::SupportClipped);
    CHECK(error_code([&] { convolve_power(MomentumPD::gaussian(0.0, 0.1), 30, pair); }) ==
          ErrorCode::WindowTooNarrow);
    std::vector<cplx> bad(pair.size(), cplx(0.0));
    bad[pair.zero_index()] = 1.0;
    bad[pair.zero_index() + 3] = cplx(0.1, 0.2);
    bad[pair.zero_index() - 3] = cplx(0.1, 0.2);
    CHECK(error_code([&] { cf_to_density(bad, pair); }) == ErrorCode::NonHermitianInput);
    CHECK(error_code([&] { convolve_power(MomentumPD::gaussian(0.0, 0.1), 0, pair); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("real quadrature with an endpoint singularity") {
    QuadratureSpec spec;
    spec.q_min = 0.0;
    spec.q_max = 1.0;
    spec.singularities = {0.0};
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-12;
    CHECK(integrate_real([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec) ==
          doctest::Approx(2.0).epsilon(1e-10));
  }
}
