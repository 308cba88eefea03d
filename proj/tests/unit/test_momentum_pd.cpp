#include <cmath>
#include <numbers>

#include "levydec/momentum_pd.hpp"
#include "levydec/spectral.hpp"
#include "support.hpp"

using namespace levydec;
using namespace testing_support;

namespace {

// Direct evaluation of the Mandel CF in long double, away from u = 0.
std::complex<long double> mandel_direct(long double u) {
  const long double sinc = std::sin(u) / u;
  const long double body = 1.5L * (sinc + (std::cos(u) - sinc) / (u * u));
  return std::polar(body, u);
}

}  // namespace

TEST_SUITE("momentum_pd") {
  TEST_CASE("Mandel CF special values") {
    CHECK(mandel_cf_unit(0.0) == cplx(1.0, 0.0));
    const double target = 3.0 / (2.0 * std::numbers::pi * std::numbers::pi);
    CHECK(std::abs(mandel_cf_unit(std::numbers::pi) - target) <= 1e-12);
    // Density-transform oracle at u = 2.5.
    CHECK(std::abs(mandel_cf_unit(2.5) - kMandelAt25) <= 1e-14);
  }

  TEST_CASE("Mandel series branch is continuous with the direct formula") {
    // Direct formula in long double away from 0, short Taylor polynomial near 0.
    for (double u : {0.05, 0.3, 0.9, 0.999, 1.001, 1.5}) {
      const auto ref = mandel_direct(static_cast<long double>(u));
      const cplx v = mandel_cf_unit(u);
      CHECK(std::abs(v.real() - static_cast<double>(ref.real())) <= 1e-14);
      CHECK(std::abs(v.imag() - static_cast<double>(ref.imag())) <= 1e-14);
    }
    for (double u : {1e-6, 1e-4, 1e-3}) {
      const double u2 = u * u;
      const double body = 1.0 - u2 / 5.0 + 3.0 * u2 * u2 / 280.0 - u2 * u2 * u2 / 3780.0;
      CHECK(std::abs(mandel_cf_unit(u) - std::polar(body, u)) <= 1e-15);
    }
  }

  TEST_CASE("Mandel CF matches the transform of its density") {
    std::vector<double> q(20001), f(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] = 2.0 * static_cast<double>(i) / static_cast<double>(q.size() - 1);
      f[i] = mandel_density_unit(q[i]);
    }
    for (double s : {0.3, 1.0, 4.0, 9.0}) {
      // Quadratic density, so the linear interpolant is off by O(dq^2).
      CHECK(std::abs(piecewise_linear_ft(q, f, s) - mandel_cf_unit(s)) <= 1e-7);
    }
  }

  TEST_CASE("Mandel CF symmetry and bound") {
    const auto pd = MomentumPD::mandel(1.7);
    for (double s = -40.0; s <= 40.0; s += 0.37) {
      CHECK(std::abs(pd.cf(-s) - std::conj(pd.cf(s))) <= 1e-15);
      CHECK(std::abs(pd.cf(s)) <= 1.0 + 1e-15);
    }
    CHECK(error_code([&] { (void)pd.density(0.5); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("tabulated density validation and normalization") {
    CHECK(error_code([] { MomentumPD::tabulated({0, 1, 2}, {1, -1, 1}); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([] { MomentumPD::tabulated({0, 1, 2}, {0, 0, 0}); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([] { MomentumPD::tabulated({0, 1, 2}, {1, 1, 1}, false); }) ==
          ErrorCode::InvalidArgument);
    const auto pd = MomentumPD::tabulated({-1, 0, 1}, {0, 3, 0});
    // Triangle on [-1, 1]: mass 1, mean 0, second moment 1/6.
    REQUIRE(pd.cached_moments().has_value());
    CHECK(pd.cached_moments()->mean == doctest::Approx(0.0));
    CHECK(pd.cached_moments()->second == doctest::Approx(1.0 / 6.0));
    CHECK(pd.density(0.5) == doctest::Approx(0.5));
    CHECK(pd.density(2.0) == 0.0);
  }

  TEST_CASE("table integrals are exact for the interpolant") {
    const auto t = table_integrals({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    // Triangle with peak 2 at q = 1 on [0, 3]: area 3, first 4, second 6.5.
    CHECK(t.mass == doctest::Approx(3.0));
    CHECK(t.first == doctest::Approx(4.0));
    CHECK(t.second == doctest::Approx(6.5));
  }

  TEST_CASE("heavy tail detection") {
    auto table = [](double power) {
      std::vector<double> q, f;
      for (double x = -1000.0; x <= 1000.0; x += 0.5) {
        q.push_back(x);
        f.push_back(1.0 / (1.0 + std::pow(std::abs(x), power)));
      }
      return std::pair{q, f};
    };
    auto [q2, f2] = table(2.0);
    CHECK(heavy_tail_order(q2, f2) == 1);
    CHECK_FALSE(tail_nonintegrable(q2, f2));
    auto [q25, f25] = table(2.5);
    CHECK(heavy_tail_order(q25, f25) == 2);
    auto [q4, f4] = table(4.0);
    CHECK(heavy_tail_order(q4, f4) == 0);
    auto [q05, f05] = table(0.5);
    CHECK(tail_nonintegrable(q05, f05));
    CHECK_FALSE(MomentumPD::tabulated(q2, f2).cached_moments().has_value());
  }

  TEST_CASE("Gaussian CF closed form against its tabulation") {
    const auto g = MomentumPD::gaussian(0.3, 0.8);
    std::vector<double> q, f;
    for (double x = -8.0; x <= 8.0; x += 1e-3) {
      q.push_back(x);
      f.push_back(g.density(x));
    }
    for (double s : {0.0, 0.5, 2.0, 5.0}) {
      CHECK(std::abs(piecewise_linear_ft(q, f, s) - g.cf(s)) <= 1e-6);
    }
    CHECK(g.cf(1.3, 2.0) == g.cf(0.65, 1.0));
    CHECK(error_code([] { MomentumPD::gaussian(0.0, 0.0); }) == ErrorCode::InvalidArgument);
  }
}
