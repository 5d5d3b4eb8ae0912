/**
 * @file surface_geometry.hpp
 * @brief Image of dhat on the Bloch sphere and its Gauss-Bonnet Euler characteristic.
 *
 * For |h| < 1 dhat sweeps the whole sphere; for |h| > 1 it stays inside a
 * cap of half-angle theta0 about -sign(h) z. A cap is a disk, so its Euler
 * characteristic needs the boundary term:
 *
 *   chi = 1/(2 pi) ( int_M K dA + oint_{dM} k_g dl )
 *
 * evaluated here on the round metric diag(rho^2, rho^2 sin^2 theta) with
 * k_g = -Gamma^1_22 sqrt(det g) / g_22^{3/2} and dl = sqrt(g_22) dphi along a
 * circle of constant theta.
 */
#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>

#include "bloch_model.hpp"
#include "core.hpp"
#include "qgt.hpp"
#include "quadrature.hpp"

namespace qgeom {

/// Metric that depends on the first coordinate only, g = g(lambda1).
template <class M>
concept AxisymmetricMetric = std::regular_invocable<const M&, double>
    && std::convertible_to<std::invoke_result_t<const M&, double>, MetricTensor>;

/// ... and also knows its derivative d g / d lambda1.
template <class M>
concept DifferentiableMetric = AxisymmetricMetric<M> && requires(const M& m, double x) {
    { m.derivative(x) } -> std::convertible_to<MetricTensor>;
};

/// Round sphere of radius rho. rho = 1/2 is the quantum metric of a qubit, rho = 1 the unit dhat sphere.
struct RoundMetric {
    double radius = 0.5;

    MetricTensor operator()(double theta) const { return metric_spherical(theta, radius); }

    MetricTensor derivative(double theta) const
    {
        return {0.0, 0.0, 2.0 * radius * radius * std::sin(theta) * std::cos(theta)};
    }

    double gaussian_curvature() const { return 1.0 / (radius * radius); }
};

/// Gamma^k_{ij}; indices are 1-based as in the usual notation.
struct Christoffel {
    std::array<double, 8> symbols{};

    double operator()(int k, int i, int j) const { return symbols[index(k, i, j)]; }
    double& operator()(int k, int i, int j) { return symbols[index(k, i, j)]; }

private:
    static std::size_t index(int k, int i, int j)
    {
        return static_cast<std::size_t>(4 * (k - 1) + 2 * (i - 1) + (j - 1));
    }
};

namespace detail {

inline void require_regular(const MetricTensor& g)
{
    // eigenvalues of the symmetric 2x2 matrix
    const double mean = 0.5 * (g.g11 + g.g22);
    const double half_gap = std::hypot(0.5 * (g.g11 - g.g22), g.g12);
    const double lo = mean - half_gap;
    const double hi = mean + half_gap;
    if (!(lo > 0.0) || hi / lo > 1e13)
        throw SingularMetric("metric is not invertible (eigenvalues " + std::to_string(lo) + ", " +
                             std::to_string(hi) + ")");
}

}  // namespace detail

/// Gamma^k_{ij} = 1/2 g^{km} (d_j g_im + d_i g_jm - d_m g_ij) from g and its two partial derivatives.
inline Christoffel christoffel_from(const MetricTensor& g, const MetricTensor& dg1, const MetricTensor& dg2)
{
    detail::require_regular(g);
    const Eigen::Matrix2d inv = g.matrix().inverse();
    const std::array<const MetricTensor*, 2> dg{&dg1, &dg2};
    Christoffel c;
    for (int k = 1; k <= 2; ++k) {
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                double sum = 0.0;
                for (int m = 1; m <= 2; ++m) {
                    const double bracket = (*dg[j - 1])(i, m) + (*dg[i - 1])(j, m) - (*dg[m - 1])(i, j);
                    sum += inv(k - 1, m - 1) * bracket;
                }
                c(k, i, j) = 0.5 * sum;
            }
        }
    }
    return c;
}

/// Christoffel symbols of an axisymmetric metric at lambda1. The analytic
/// derivative is used when the metric provides one, central differences otherwise.
template <AxisymmetricMetric M>
Christoffel christoffel(const M& metric, double lambda1, double step = default_fd_step)
{
    const MetricTensor g = metric(lambda1);
    MetricTensor dg1;
    if constexpr (DifferentiableMetric<M>) {
        dg1 = metric.derivative(lambda1);
    } else {
        const MetricTensor up = metric(lambda1 + step);
        const MetricTensor down = metric(lambda1 - step);
        const double inv = 0.5 / step;
        dg1 = {(up.g11 - down.g11) * inv, (up.g12 - down.g12) * inv, (up.g22 - down.g22) * inv};
    }
    return christoffel_from(g, dg1, MetricTensor{});
}

struct BoundaryCurve {
    double theta0 = 0.0;
    /// geodesic curvature, positive when the curve bends towards the cap centre
    double kg = 0.0;
    double dl_dphi = 0.0;
};

/// Boundary invariants of the curve lambda1 = theta0.
template <AxisymmetricMetric M>
BoundaryCurve geodesic_curvature(const M& metric, double theta0, double step = default_fd_step)
{
    if (!(theta0 > tol::pole_margin && theta0 < pi - tol::pole_margin))
        throw SingularMetric("boundary angle " + std::to_string(theta0) + " is too close to a pole");
    const Christoffel gamma = christoffel(metric, theta0, step);
    const MetricTensor g = metric(theta0);
    BoundaryCurve b;
    b.theta0 = theta0;
    b.kg = -gamma(1, 2, 2) * g.sqrt_det() / std::pow(g.g22, 1.5);
    b.dl_dphi = std::sqrt(g.g22);
    return b;
}

/// Unsigned curvature of a circle of radius r drawn on a sphere of radius rho.
inline double circle_geodesic_curvature(double rho, double r)
{
    return std::sqrt(rho * rho - r * r) / (rho * r);
}

/// Where dhat lands on the unit sphere.
struct CapGeometry {
    bool full_sphere = true;
    Vec3 pole = Vec3::UnitZ();
    /// largest polar angle from `pole` reached by dhat; pi for the full sphere
    double theta0 = pi;
    /// 2 pi (1 - cos theta0)
    double solid_angle = 4.0 * pi;
    /// how many times the domain covers the image
    int multiplicity = 1;
    double multiplicity_raw = 1.0;
};

/// A cap of half-angle theta0 covered once; theta0 = pi gives the full sphere.
inline CapGeometry cap_from_angle(double theta0, const Vec3& pole = Vec3::UnitZ())
{
    if (!(theta0 > 0.0 && theta0 <= pi))
        throw std::invalid_argument("cap angle must lie in (0, pi]");
    CapGeometry cap;
    cap.full_sphere = std::abs(theta0 - pi) < 1e-9;
    cap.pole = pole;
    cap.theta0 = cap.full_sphere ? pi : theta0;
    cap.solid_angle = two_pi * (1.0 - std::cos(cap.theta0));
    return cap;
}

/// sin theta0 = alpha / sqrt(alpha^2 + h^2 - 1) for |h| > 1, obtained by
/// maximising tan theta over kx (the maximum sits at cos kx = -1/h). Kept as
/// a cross-check for the numeric extremisation; pi when |h| < 1.
inline double theta0_closed_form(const ModelParams& p)
{
    if (std::abs(p.h) < 1.0)
        return pi;
    return std::asin(std::abs(p.alpha) / std::sqrt(p.alpha * p.alpha + p.h * p.h - 1.0));
}

/// Integral of |F| over the domain. Kinks of |F| are split out.
inline QuadResult absolute_berry_flux(const ModelParams& p, const QuadratureSpec& base = {})
{
    QuadratureSpec spec = kink_split_spec(p, base);
    spec.reduce_ky = true;
    return integrate_2d([&](KPoint k) { return std::abs(berry_curvature_analytic(p, k)); }, spec);
}

namespace detail {

inline void require_supported(const ModelParams& p)
{
    p.validate();
    if (p.critical())
        throw CriticalPoint("h=" + std::to_string(p.h) + " is within gap_tol of the critical point |h|=1");
    if (p.degenerate())
        throw DegenerateAlpha("alpha=" + std::to_string(p.alpha) + " collapses the image onto the poles");
}

/// Largest polar angle of dhat about `pole` along kx, from a grid scan
/// followed by golden-section refinement around the best grid node.
inline double max_polar_angle(const ModelParams& p, const Vec3& pole, Interval kx, double ky, std::size_t resolution)
{
    const ModelField field{p};
    auto angle = [&](double x) { return to_spherical(unit_vector(field, KPoint(x, ky)), pole).theta; };

    const double dx = kx.length() / static_cast<double>(resolution);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i <= resolution; ++i) {
        const double v = angle(kx.lo + static_cast<double>(i) * dx);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = kx.lo + (static_cast<double>(best) - 1.0) * dx;
    double b = kx.lo + (static_cast<double>(best) + 1.0) * dx;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = angle(c);
    double fd = angle(d);
    for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = angle(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = angle(d);
        }
    }
    return std::max({best_val, fc, fd, angle(0.5 * (a + b))});
}

}  // namespace detail

/// Describes the image of dhat for the model: full sphere or cap, and the
/// covering multiplicity m = (solid angle swept) / (solid angle of the image),
/// where the swept solid angle is 2 int |F| dkx dky.
inline CapGeometry analyze_image(const ModelParams& p, const QuadratureSpec& spec)
{
    detail::require_supported(p);
    spec.validate();

    const Vec3 pole = cap_pole(p);
    const double theta0 = detail::max_polar_angle(p, pole, spec.kx, spec.ky.lo, spec.n_points);
    CapGeometry cap = cap_from_angle(std::min(theta0, pi), pole);

    const QuadResult flux = absolute_berry_flux(p, spec);
    cap.multiplicity_raw = 2.0 * flux.value / cap.solid_angle;
    const double m = std::round(cap.multiplicity_raw);
    if (std::abs(cap.multiplicity_raw - m) > tol::integrality || m < 1.0)
        throw NonIntegralMultiplicity("covering ratio " + std::to_string(cap.multiplicity_raw) +
                                      " is not an integer for h=" + std::to_string(p.h));
    cap.multiplicity = static_cast<int>(m);
    return cap;
}

inline CapGeometry analyze_image(const ModelParams& p, std::size_t resolution = 2048)
{
    QuadratureSpec spec;
    spec.n_points = resolution;
    return analyze_image(p, spec);
}

struct GaussBonnetTerms {
    double bulk = 0.0;
    double boundary = 0.0;
    double total = 0.0;
    double est_error = 0.0;
};

/// Bulk and boundary contributions for one cover of the image, on a round metric.
inline GaussBonnetTerms gauss_bonnet_terms(const CapGeometry& cap, const RoundMetric& metric = {},
                                           std::size_t n = 2048)
{
    if (!(cap.theta0 > 0.0 && cap.theta0 <= pi))
        throw std::invalid_argument("cap angle must lie in (0, pi]");
    const double curvature = metric.gaussian_curvature();
    // The metric does not depend on phi, so the phi integral contributes 2 pi exactly.
    const QuadResult area = integrate_1d([&](double theta) { return curvature * metric(theta).sqrt_det(); },
                                         Interval{0.0, cap.theta0}, Rule::composite_simpson, {}, n,
                                         tol::quadrature);
    GaussBonnetTerms t;
    t.bulk = area.value;
    t.est_error = area.est_error;
    if (!cap.full_sphere) {
        const BoundaryCurve curve = geodesic_curvature(metric, cap.theta0);
        t.boundary = curve.kg * curve.dl_dphi;
    }
    t.total = t.bulk + t.boundary;
    return t;
}

/// Euler characteristic of a single cover: 2 for the sphere, 1 for a cap.
inline double gauss_bonnet(const CapGeometry& cap, const RoundMetric& metric = {})
{
    return gauss_bonnet_terms(cap, metric).total;
}

}  // namespace qgeom
