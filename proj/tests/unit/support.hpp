#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "doctest.h"
#include "levydec/errors.hpp"

namespace testing_support {

using cplx = std::complex<double>;

// Code of the levydec::Error thrown by f, or nullopt when nothing is thrown.
inline std::optional<levydec::ErrorCode> error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const levydec::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Values computed independently with mpmath (30 digits): the Levy measure
// constant int (1 - cos u)|u|^(-alpha-1) du by direct oscillatory quadrature,
// and the Mandel CF as the transform of the density (3/8)(1 + (q-1)^2) on [0, 2].
inline constexpr double kKappa05 = 5.0132565492620010048;
inline constexpr double kKappa15 = 3.3421710328413339844;
inline constexpr double kC05 = 0.19947114020071633897;
inline constexpr double kC15 = 0.29920671030107451014;
inline const cplx kMandelAt25{-0.0876094549595237424250782097697, 0.0654462163036903650872284000399};

// Mandel density for hbar k0 = 1; only ever used as an oracle.
inline double mandel_density_unit(double q) {
  return (q < 0.0 || q > 2.0) ? 0.0 : 0.375 * (1.0 + (q - 1.0) * (q - 1.0));
}

}  // namespace testing_support
