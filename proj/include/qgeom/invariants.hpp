/**
 * @file invariants.hpp
 * @brief Chern number, bulk-only Euler number and boundary-corrected Euler
 *        characteristic of the two-band model.
 *
 *   C         = 1/(2 pi) int F dkx dky
 *   chi_naive = 1/(4 pi) int R sqrt(det g) dkx dky,   R = 8
 *   chi       = m * chi(one cover),   chi(one cover) = 2 (sphere) or 1 (cap)
 *
 * chi_naive misses the boundary term, so it drops below 4 once |h| > 1.
 */
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "bloch_model.hpp"
#include "core.hpp"
#include "qgt.hpp"
#include "quadrature.hpp"
#include "surface_geometry.hpp"

namespace qgeom {

/// Ricci scalar of the qubit quantum-state manifold (twice K = 4).
inline constexpr double ricci_scalar = 8.0;

namespace detail {

/// Periodic smooth integrand over a full kx period: midpoint, otherwise Simpson.
inline QuadratureSpec smooth_spec(const QuadratureSpec& base)
{
    QuadratureSpec spec = base;
    spec.split_points.clear();
    spec.rule = is_full_period(base.kx) ? Rule::midpoint_periodic : Rule::composite_simpson;
    return spec;
}

inline QuadResult scaled(QuadResult r, double factor)
{
    return {r.value * factor, r.est_error * std::abs(factor)};
}

}  // namespace detail

inline QuadResult chern_number(const ModelParams& p, const QuadratureSpec& base = {})
{
    detail::require_supported(p);
    const QuadratureSpec spec = detail::smooth_spec(base);
    const QuadResult flux = integrate_2d([&](KPoint k) { return berry_curvature_analytic(p, k); }, spec);
    return detail::scaled(flux, 1.0 / two_pi);
}

/// Chern number of an arbitrary field from finite-difference curvature. The
/// integrand is integrated with the rule and splits given in `spec`.
template <DField F>
QuadResult chern_number(const F& field, const QuadratureSpec& spec, double step = 1e-5, Band band = Band::ground)
{
    const QuadResult flux = integrate_2d([&](KPoint k) { return berry_curvature_numeric(field, k, step, band); }, spec);
    return detail::scaled(flux, 1.0 / two_pi);
}

inline QuadResult euler_naive(const ModelParams& p, const QuadratureSpec& base = {})
{
    detail::require_supported(p);
    const QuadratureSpec spec = kink_split_spec(p, base);
    const QuadResult area = integrate_2d([&](KPoint k) { return sqrt_det_g(p, k); }, spec);
    return detail::scaled(area, ricci_scalar / (4.0 * pi));
}

/// chi_naive through the curvature instead of the metric: (1/pi) int |F|.
inline QuadResult euler_naive_from_flux(const ModelParams& p, const QuadratureSpec& base = {})
{
    detail::require_supported(p);
    return detail::scaled(absolute_berry_flux(p, base), 1.0 / pi);
}

inline QuadResult euler_corrected(const CapGeometry& cap)
{
    const GaussBonnetTerms terms = gauss_bonnet_terms(cap);
    return {cap.multiplicity * terms.total, cap.multiplicity * terms.est_error};
}

inline QuadResult euler_corrected(const ModelParams& p, const QuadratureSpec& base = {})
{
    return euler_corrected(analyze_image(p, base));
}

struct InvariantErrors {
    double chern = 0.0;
    double chi_naive = 0.0;
    double chi_corrected = 0.0;
};

struct InvariantReport {
    double h = 0.0;
    double alpha = 1.0;
    double chern = 0.0;
    double chi_naive = 0.0;
    double chi_corrected = 0.0;
    int multiplicity = 0;
    double multiplicity_raw = 0.0;
    /// empty when dhat covers the full sphere
    std::optional<double> theta0;
    InvariantErrors est_error;
};

inline InvariantReport compute_report(const ModelParams& p, const QuadratureSpec& spec = {})
{
    const CapGeometry cap = analyze_image(p, spec);
    const QuadResult c = chern_number(p, spec);
    const QuadResult naive = euler_naive(p, spec);
    const QuadResult corrected = euler_corrected(cap);

    InvariantReport r;
    r.h = p.h;
    r.alpha = p.alpha;
    r.chern = c.value;
    r.chi_naive = naive.value;
    r.chi_corrected = corrected.value;
    r.multiplicity = cap.multiplicity;
    r.multiplicity_raw = cap.multiplicity_raw;
    if (!cap.full_sphere)
        r.theta0 = cap.theta0;
    r.est_error = {c.est_error, naive.est_error, corrected.est_error};
    return r;
}

/// Rounds `value` after checking it is within max(tolerance, est_error) of an integer.
inline double round_checked(double value, double est_error, double tolerance = 1e-6)
{
    const double r = std::round(value);
    if (std::abs(value - r) > std::max(tolerance, est_error))
        throw NonIntegralValue("value " + std::to_string(value) + " is not integral");
    return r + 0.0;  // no -0
}

}  // namespace qgeom
