/**
 * @file bloch_model.hpp
 * @brief Two-band Bloch Hamiltonian H = d(k).sigma, its eigen-system and the
 *        unit Bloch vector with spherical angles about a chosen pole.
 *
 * The model studied here is
 *
 *   H(kx, ky) = (Omega/2) [ -h - cos kx            alpha sin kx e^{-i ky} ]
 *                         [ alpha sin kx e^{i ky}   h + cos kx            ]
 *
 * i.e. d = (Omega/2) (alpha sin kx cos ky, alpha sin kx sin ky, -(h + cos kx)).
 * Everything geometric only ever sees dhat, so Omega enters through
 * d_vector() and hamiltonian() alone.
 */
#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "core.hpp"

namespace qgeom {

/// Any map from the parameter torus to a real 3-vector d(k).
template <class F>
concept DField = std::regular_invocable<const F&, KPoint>
    && std::convertible_to<std::invoke_result_t<const F&, KPoint>, Vec3>;

struct ModelParams {
    double h = 0.0;
    double alpha = 1.0;
    double omega = 2.0;

    void validate() const
    {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("omega must be positive, got " + std::to_string(omega));
        if (!std::isfinite(h) || !std::isfinite(alpha))
            throw std::invalid_argument("h and alpha must be finite");
    }

    /// The gap closes at |h| = 1.
    bool critical() const { return std::abs(std::abs(h) - 1.0) < tol::gap_tol; }
    bool degenerate() const { return std::abs(alpha) < tol::alpha_tol; }
};

/// d(k) in units of Omega/2. This is the field all geometry is computed from.
struct ModelField {
    ModelParams params;

    Vec3 operator()(KPoint k) const
    {
        const double s = std::sin(k.kx);
        return {params.alpha * s * std::cos(k.ky),
                params.alpha * s * std::sin(k.ky),
                -(params.h + std::cos(k.kx))};
    }
};

struct DVec {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
    double d = 0.0;

    Vec3 vec() const { return {dx, dy, dz}; }
};

inline DVec d_vector(const ModelParams& p, KPoint k)
{
    const double half = 0.5 * p.omega;
    const double s = std::sin(k.kx);
    DVec out;
    out.dx = half * p.alpha * s * std::cos(k.ky);
    out.dy = half * p.alpha * s * std::sin(k.ky);
    out.dz = -half * (p.h + std::cos(k.kx));
    out.d = std::sqrt(out.dx * out.dx + out.dy * out.dy + out.dz * out.dz);
    return out;
}

using Hamiltonian = Eigen::Matrix2cd;

/// dx sigma_x + dy sigma_y + dz sigma_z.
inline Hamiltonian pauli_expand(const Vec3& d)
{
    using C = std::complex<double>;
    Hamiltonian m;
    m << C(d.z(), 0.0), C(d.x(), -d.y()),
         C(d.x(), d.y()), C(-d.z(), 0.0);
    return m;
}

/// Matrix elements written out entry by entry, independent of pauli_expand().
inline Hamiltonian hamiltonian(const ModelParams& p, KPoint k)
{
    using C = std::complex<double>;
    const double half = 0.5 * p.omega;
    const double diag = -p.h - std::cos(k.kx);
    const double off = p.alpha * std::sin(k.kx);
    const C phase = std::polar(1.0, k.ky);
    Hamiltonian m;
    m << C(half * diag, 0.0), half * off * std::conj(phase),
         half * off * phase, C(-half * diag, 0.0);
    return m;
}

struct EigenSystem {
    double e_minus = 0.0;
    double e_plus = 0.0;
    Eigen::Vector2cd u_minus;
    Eigen::Vector2cd u_plus;
};

namespace detail {

// Eigenvector of d.sigma for eigenvalue e = +-|d|. Of the two closed forms
// (dx - i dy, e - dz) and (e + dz, dx + i dy) the one with the larger norm
// is taken; their squared norms are 2|d|(|d| -+ dz sign(e)).
inline Eigen::Vector2cd two_level_eigenvector(const Vec3& d, double e)
{
    using C = std::complex<double>;
    Eigen::Vector2cd v;
    if (e * d.z() <= 0.0)
        v << C(d.x(), -d.y()), C(e - d.z(), 0.0);
    else
        v << C(e + d.z(), 0.0), C(d.x(), d.y());
    return v / v.norm();
}

}  // namespace detail

/// Ground state is the E = -|d| branch.
inline EigenSystem eigensystem(const ModelParams& p, KPoint k)
{
    const DVec d = d_vector(p, k);
    if (d.d <= tol::gap_floor * 0.5 * p.omega)
        throw GapClosure("gap closes at kx=" + std::to_string(k.kx) + " for h=" + std::to_string(p.h));
    EigenSystem es;
    es.e_minus = -d.d;
    es.e_plus = d.d;
    es.u_minus = detail::two_level_eigenvector(d.vec(), -d.d);
    es.u_plus = detail::two_level_eigenvector(d.vec(), d.d);
    return es;
}

/// Orthonormal pair (e1, e2) spanning the plane normal to `pole`. For poles
/// along +-z the pair is (x, y) in both cases so that phi = atan2(dy, dx).
inline std::pair<Vec3, Vec3> pole_frame(const Vec3& pole)
{
    if (std::abs(pole.x()) < 1e-12 && std::abs(pole.y()) < 1e-12)
        return {Vec3::UnitX(), Vec3::UnitY()};
    const Vec3 seed = std::abs(pole.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    const Vec3 e1 = (seed - seed.dot(pole) * pole).normalized();
    return {e1, pole.cross(e1)};
}

struct UnitD {
    Vec3 dhat = Vec3::UnitZ();
    Vec3 pole = Vec3::UnitZ();
    /// polar angle from the pole, in [0, pi]
    double theta = 0.0;
    /// azimuth in [0, 2pi)
    double phi = 0.0;
};

inline Vec3 from_spherical(double theta, double phi, const Vec3& pole)
{
    const auto [e1, e2] = pole_frame(pole);
    return std::sin(theta) * (std::cos(phi) * e1 + std::sin(phi) * e2) + std::cos(theta) * pole;
}

inline UnitD to_spherical(const Vec3& dhat, const Vec3& pole)
{
    if (std::abs(pole.norm() - 1.0) > tol::unit_norm)
        throw std::invalid_argument("pole must be a unit vector");
    const auto [e1, e2] = pole_frame(pole);
    UnitD u;
    u.dhat = dhat;
    u.pole = pole;
    // atan2 keeps full precision near the pole where acos would not.
    u.theta = std::atan2(dhat.cross(pole).norm(), dhat.dot(pole));
    u.phi = wrap_angle(std::atan2(dhat.dot(e2), dhat.dot(e1)));
    return u;
}

template <DField F>
Vec3 unit_vector(const F& field, KPoint k)
{
    const Vec3 d = field(k);
    const double n = d.norm();
    if (!(n > tol::gap_floor))
        throw GapClosure("|d| <= gap floor at k=(" + std::to_string(k.kx) + ", " + std::to_string(k.ky) + ")");
    return d / n;
}

template <DField F>
UnitD unit_d(const F& field, KPoint k, const Vec3& pole = Vec3::UnitZ())
{
    return to_spherical(unit_vector(field, k), pole);
}

inline UnitD unit_d(const ModelParams& p, KPoint k, const Vec3& pole = Vec3::UnitZ())
{
    return unit_d(ModelField{p}, k, pole);
}

/// -sign(h) z for |h| > 1, where dz cannot change sign; +z otherwise.
inline Vec3 cap_pole(const ModelParams& p)
{
    if (std::abs(p.h) > 1.0)
        return p.h > 0.0 ? Vec3(-Vec3::UnitZ()) : Vec3(Vec3::UnitZ());
    return Vec3::UnitZ();
}

}  // namespace qgeom
