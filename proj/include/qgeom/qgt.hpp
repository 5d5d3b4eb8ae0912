/**
 * @file qgt.hpp
 * @brief Quantum metric and Berry curvature of a two-level system.
 *
 * Two routes are provided. The closed forms hold for the model in
 * bloch_model.hpp:
 *
 *   g   = 1/4 diag( alpha^2 (1 + h cos kx)^2 / f^2 , alpha^2 sin^2 kx / f )
 *   F   = alpha^2 (1 + h cos kx) sin kx / (2 f^{3/2})          (ground band)
 *   f   = (h + cos kx)^2 + alpha^2 sin^2 kx
 *
 * The numeric route works for any DField from central differences of dhat:
 *
 *   g_{mu nu} = 1/4 d_mu dhat . d_nu dhat
 *   F_ground  = -1/2 dhat . (d_x dhat x d_y dhat)
 *
 * The sign of F_ground is fixed so that both routes agree on the model; the
 * excited band carries the opposite sign. For every two-level system
 * sqrt(det g) = |F| / 2.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bloch_model.hpp"
#include "core.hpp"
#include "quadrature.hpp"

namespace qgeom {

/// Symmetric 2x2 metric, coordinates (kx, ky) or (theta, phi).
struct MetricTensor {
    double g11 = 0.0;
    double g12 = 0.0;
    double g22 = 0.0;

    double det() const { return g11 * g22 - g12 * g12; }
    double sqrt_det() const { return std::sqrt(std::max(det(), 0.0)); }

    Eigen::Matrix2d matrix() const
    {
        Eigen::Matrix2d m;
        m << g11, g12, g12, g22;
        return m;
    }

    double operator()(int i, int j) const
    {
        if (i == 1 && j == 1)
            return g11;
        if (i == 2 && j == 2)
            return g22;
        return g12;
    }
};

struct QGTSample {
    KPoint k;
    MetricTensor g;
    double berry = 0.0;
    double sqrt_det_g = 0.0;
    Vec3 dhat = Vec3::UnitZ();
};

inline double band_sign(Band band) { return band == Band::ground ? 1.0 : -1.0; }

/// f = (h + cos kx)^2 + alpha^2 sin^2 kx, i.e. |d|^2 / (Omega/2)^2.
inline double f_scale(const ModelParams& p, KPoint k)
{
    const double c = std::cos(k.kx);
    const double s = std::sin(k.kx);
    return (p.h + c) * (p.h + c) + p.alpha * p.alpha * s * s;
}

namespace detail {

inline double gapped_f(const ModelParams& p, KPoint k)
{
    const double f = f_scale(p, k);
    if (!(f > tol::gap_floor * tol::gap_floor))
        throw GapClosure("f <= gap_floor^2 at kx=" + std::to_string(k.kx) + " for h=" + std::to_string(p.h));
    return f;
}

}  // namespace detail

/// Identical for both bands and independent of ky.
inline MetricTensor metric_analytic(const ModelParams& p, KPoint k)
{
    const double f = detail::gapped_f(p, k);
    const double c = std::cos(k.kx);
    const double s = std::sin(k.kx);
    const double a2 = p.alpha * p.alpha;
    const double w = 1.0 + p.h * c;
    return {0.25 * a2 * w * w / (f * f), 0.0, 0.25 * a2 * s * s / f};
}

inline double sqrt_det_g(const ModelParams& p, KPoint k)
{
    const double f = detail::gapped_f(p, k);
    const double c = std::cos(k.kx);
    const double s = std::sin(k.kx);
    return p.alpha * p.alpha * std::abs((1.0 + p.h * c) * s) / (4.0 * f * std::sqrt(f));
}

inline double berry_curvature_analytic(const ModelParams& p, KPoint k, Band band = Band::ground)
{
    const double f = detail::gapped_f(p, k);
    const double c = std::cos(k.kx);
    const double s = std::sin(k.kx);
    return band_sign(band) * p.alpha * p.alpha * (1.0 + p.h * c) * s / (2.0 * f * std::sqrt(f));
}

inline QGTSample qgt_sample(const ModelParams& p, KPoint k, Band band = Band::ground)
{
    QGTSample q;
    q.k = k;
    q.g = metric_analytic(p, k);
    q.berry = berry_curvature_analytic(p, k, band);
    q.sqrt_det_g = sqrt_det_g(p, k);
    q.dhat = unit_vector(ModelField{p}, k);
    return q;
}

/// dhat and its first derivatives at one point.
struct UnitDerivatives {
    Vec3 n;
    Vec3 dx;
    Vec3 dy;
};

inline constexpr double min_fd_step = 1e-6;
inline constexpr double max_fd_step = 1e-2;
inline constexpr double default_fd_step = 1e-4;

/// Second-order central differences (four stencil points plus the centre).
template <DField F>
UnitDerivatives unit_derivatives(const F& field, KPoint k, double step = default_fd_step)
{
    if (!(step >= min_fd_step && step <= max_fd_step))
        throw std::invalid_argument("finite-difference step must lie in [1e-6, 1e-2]");
    const double x = k.kx;
    const double y = k.ky;
    const double inv = 0.5 / step;
    UnitDerivatives u;
    u.n = unit_vector(field, k);
    u.dx = (unit_vector(field, KPoint(x + step, y)) - unit_vector(field, KPoint(x - step, y))) * inv;
    u.dy = (unit_vector(field, KPoint(x, y + step)) - unit_vector(field, KPoint(x, y - step))) * inv;
    return u;
}

inline MetricTensor metric_from(const UnitDerivatives& u)
{
    return {0.25 * u.dx.dot(u.dx), 0.25 * u.dx.dot(u.dy), 0.25 * u.dy.dot(u.dy)};
}

inline double berry_from(const UnitDerivatives& u, Band band = Band::ground)
{
    return -0.5 * band_sign(band) * u.n.dot(u.dx.cross(u.dy));
}

template <DField F>
MetricTensor metric_numeric(const F& field, KPoint k, double step = default_fd_step)
{
    return metric_from(unit_derivatives(field, k, step));
}

template <DField F>
double berry_curvature_numeric(const F& field, KPoint k, double step = default_fd_step, Band band = Band::ground)
{
    return berry_from(unit_derivatives(field, k, step), band);
}

template <DField F>
QGTSample qgt_sample_numeric(const F& field, KPoint k, double step = default_fd_step, Band band = Band::ground)
{
    const UnitDerivatives u = unit_derivatives(field, k, step);
    QGTSample q;
    q.k = k;
    q.g = metric_from(u);
    q.berry = berry_from(u, band);
    q.sqrt_det_g = q.g.sqrt_det();
    q.dhat = u.n;
    return q;
}

/// Round metric of radius rho in (theta, phi); rho = 1/2 is the Bloch-sphere quantum metric.
inline MetricTensor metric_spherical(double theta, double radius = 0.5)
{
    const double r2 = radius * radius;
    const double s = std::sin(theta);
    return {r2, 0.0, r2 * s * s};
}

/// Interior zeros of (1 + h cos kx) sin kx inside `range`, sorted. These are
/// the kinks of sqrt(det g) and |F|.
inline std::vector<double> kink_abscissae(const ModelParams& p, Interval range = {})
{
    std::vector<double> candidates{0.0, pi, two_pi};
    if (std::abs(p.h) >= 1.0) {
        const double a = std::acos(-1.0 / p.h);
        candidates.push_back(a);
        candidates.push_back(two_pi - a);
    }
    std::vector<double> out;
    const double margin = 1e-12;
    for (double c : candidates) {
        if (c > range.lo + margin && c < range.hi - margin)
            out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

/// Copy of `base` set up for a kinked, ky-independent model integrand:
/// Simpson on the pieces between the kinks of (1 + h cos kx) sin kx.
inline QuadratureSpec kink_split_spec(const ModelParams& p, const QuadratureSpec& base)
{
    QuadratureSpec spec = base;
    spec.rule = Rule::composite_simpson;
    spec.split_points = kink_abscissae(p, base.kx);
    return spec;
}

}  // namespace qgeom
