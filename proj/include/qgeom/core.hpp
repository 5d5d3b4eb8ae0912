/**
 * @file core.hpp
 * @brief Shared vocabulary: parameter-space points, tolerances and error types.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qgeom {

using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace tol {
/// Norm of d (in units of Omega/2) at or below which the gap counts as closed.
inline constexpr double gap_floor = 1e-10;
/// Half-width on ||h|-1| inside which parameters are flagged critical.
inline constexpr double gap_tol = 1e-6;
/// |alpha| below this collapses the image of dhat onto the poles.
inline constexpr double alpha_tol = 1e-9;
inline constexpr double unit_norm = 1e-12;
/// Allowed distance of the raw covering ratio from an integer.
inline constexpr double integrality = 1e-3;
/// Target for smooth one-dimensional integrals.
inline constexpr double quadrature = 1e-9;
/// Polar angles closer than this to a pole make the spherical metric singular.
inline constexpr double pole_margin = 1e-6;
}  // namespace tol

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The two bands touch (|d| at or below the gap floor).
class GapClosure : public Error {
public:
    using Error::Error;
};

/// Parameters sit on the |h| = 1 phase boundary.
class CriticalPoint : public Error {
public:
    using Error::Error;
};

class DegenerateAlpha : public Error {
public:
    using Error::Error;
};

class NonIntegralMultiplicity : public Error {
public:
    using Error::Error;
};

/// A quantity asserted to be an integer is not (round mode).
class NonIntegralValue : public Error {
public:
    using Error::Error;
};

class SingularMetric : public Error {
public:
    using Error::Error;
};

/// Successive quadrature refinements disagree by more than the allowed slack.
class NonConvergent : public Error {
public:
    using Error::Error;
};

/// Reduces an angle into [0, 2pi).
inline double wrap_angle(double x)
{
    double r = std::fmod(x, two_pi);
    if (r < 0.0)
        r += two_pi;
    if (r >= two_pi)
        r = 0.0;
    return r;
}

/// A point of the two-dimensional parameter torus; both angles are kept in [0, 2pi).
struct KPoint {
    double kx = 0.0;
    double ky = 0.0;

    KPoint() = default;
    KPoint(double x, double y) : kx(wrap_angle(x)), ky(wrap_angle(y)) {}
};

enum class Band { ground, excited };

/// Closed coordinate interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = two_pi;

    double length() const { return hi - lo; }
};

}  // namespace qgeom
