// types.hpp — shared aliases, default tolerances, small numeric helpers.
//
// Units: hbar = 1 throughout. Energies carry the hopping scale gamma as an
// explicit factor in the graph builders; detection periods tau are therefore
// expressed in units of hbar/gamma.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace qfd {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace tol {
// Hermiticity check, absolute on |H(i,j) - conj(H(j,i))|.
inline constexpr double hermitian = 1e-12;
// Energy degeneracy merge, relative to the spectral range.
inline constexpr double degeneracy_rel = 1e-9;
// Quasienergy phase coincidence, radians.
inline constexpr double phase = 1e-9;
// A sector counts as completely dark when <P_l>_{psi_d} falls below this.
inline constexpr double completely_dark = 1e-12;
// Unit-norm validation for state vectors.
inline constexpr double unit_norm = 1e-10;
}  // namespace tol

// Wraps x into [0, 2*pi).
inline double wrap_phase(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    // fmod can return exactly two_pi after the correction when x is a tiny
    // negative number; fold that back to zero.
    if (y >= two_pi) y -= two_pi;
    return y;
}

// Distance between two phases on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
    double d = std::abs(wrap_phase(a) - wrap_phase(b));
    return d > std::numbers::pi ? two_pi - d : d;
}

inline bool is_unit_vector(const Vec& v, double eps = tol::unit_norm) {
    return std::abs(v.norm() - 1.0) <= eps;
}

}  // namespace qfd
