/**
 * @file quadrature.hpp
 * @brief Quadrature over the parameter torus.
 *
 * Two rules are used. On a full period with a smooth integrand the midpoint
 * rule converges spectrally. Where the integrand has kinks (|.| of a smooth
 * function) the interval is split at the kinks and each piece gets composite
 * Simpson. By default the Simpson nodes of a piece are graded towards its
 * ends through x = lo + L (t - sin(2 pi t) / (2 pi)); the kinks, and for the
 * two-band model also the near-gap points kx = 0, pi, sit at piece ends, which
 * is where the integrand varies fastest.
 *
 * The error estimate is the difference to the same rule at half the node
 * count, which over-estimates the error of the finer result once both are in
 * their asymptotic regime.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace qgeom {

enum class Rule { midpoint_periodic, composite_simpson };

struct QuadratureSpec {
    /// Nodes per axis (panels for Simpson).
    std::size_t n_points = 2048;
    Rule rule = Rule::midpoint_periodic;
    /// Interior kink abscissae in kx, sorted. Non-empty forces Simpson on the pieces.
    std::vector<double> split_points;
    /// Cluster Simpson nodes towards the ends of each piece.
    bool graded = true;
    /// Integrate over kx only and multiply by the ky length (integrand must not depend on ky).
    bool reduce_ky = true;
    Interval kx{};
    Interval ky{};
    /// Refinement disagreement beyond 10x this raises NonConvergent.
    double target_tol = 1e-6;

    void validate() const
    {
        if (n_points < 32)
            throw std::invalid_argument("n_points must be at least 32, got " + std::to_string(n_points));
        if (!(kx.lo < kx.hi) || !(ky.lo < ky.hi))
            throw std::invalid_argument("integration intervals must have lo < hi");
        if (!(target_tol > 0.0))
            throw std::invalid_argument("target_tol must be positive");
        double prev = kx.lo;
        for (double s : split_points) {
            if (!(s > prev) || !(s < kx.hi))
                throw std::invalid_argument("split points must be sorted and strictly inside the kx interval");
            prev = s;
        }
    }
};

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
};

namespace detail {

/// Weighted sum and the sum of |weighted terms| (for a round-off floor).
struct Sum {
    double value = 0.0;
    double magnitude = 0.0;
};

inline bool is_full_period(Interval r) { return std::abs(r.length() - two_pi) < 1e-12; }

template <class Fn>
Sum midpoint_sum(const Fn& fn, Interval r, std::size_t n)
{
    const double w = r.length() / static_cast<double>(n);
    Sum s;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = w * fn(r.lo + (static_cast<double>(i) + 0.5) * w);
        s.value += v;
        s.magnitude += std::abs(v);
    }
    return s;
}

/// `panels` must be even.
template <class Fn>
Sum simpson_sum(const Fn& fn, Interval r, std::size_t panels)
{
    const double hstep = r.length() / static_cast<double>(panels);
    Sum s;
    for (std::size_t i = 0; i <= panels; ++i) {
        const double x = i == panels ? r.hi : r.lo + static_cast<double>(i) * hstep;
        const double c = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double v = c * hstep / 3.0 * fn(x);
        s.value += v;
        s.magnitude += std::abs(v);
    }
    return s;
}

/// Simpson in t on [0, 1] after x = lo + L (t - sin(2 pi t)/(2 pi)). The
/// Jacobian vanishes at both ends, so fn is never evaluated there.
template <class Fn>
Sum graded_simpson_sum(const Fn& fn, Interval r, std::size_t panels)
{
    const double len = r.length();
    const double dt = 1.0 / static_cast<double>(panels);
    Sum s;
    for (std::size_t i = 1; i < panels; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double x = r.lo + len * (t - std::sin(two_pi * t) / two_pi);
        const double jac = len * (1.0 - std::cos(two_pi * t));
        const double c = i % 2 == 1 ? 4.0 : 2.0;
        const double v = c * dt / 3.0 * jac * fn(x);
        s.value += v;
        s.magnitude += std::abs(v);
    }
    return s;
}

template <class Fn>
Sum rule_sum(const Fn& fn, Interval r, Rule rule, const std::vector<double>& splits, std::size_t n,
             bool graded = false)
{
    if (rule == Rule::midpoint_periodic && splits.empty())
        return midpoint_sum(fn, r, n);

    Sum total;
    double lo = r.lo;
    for (std::size_t i = 0; i <= splits.size(); ++i) {
        const double hi = i < splits.size() ? splits[i] : r.hi;
        const double share = static_cast<double>(n) * (hi - lo) / r.length();
        std::size_t panels = 2 * static_cast<std::size_t>(std::ceil(share / 2.0));
        panels = std::max<std::size_t>(panels, 4);
        const Sum piece = graded ? graded_simpson_sum(fn, Interval{lo, hi}, panels)
                                 : simpson_sum(fn, Interval{lo, hi}, panels);
        total.value += piece.value;
        total.magnitude += piece.magnitude;
        lo = hi;
    }
    return total;
}

inline QuadResult finish(const Sum& fine, const Sum& coarse, double target_tol)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    QuadResult out;
    out.value = fine.value;
    out.est_error = std::max(std::abs(fine.value - coarse.value), 32.0 * eps * fine.magnitude);
    if (out.est_error > 10.0 * target_tol)
        throw NonConvergent("quadrature refinements disagree by " + std::to_string(out.est_error));
    return out;
}

}  // namespace detail

/// One-dimensional integral of fn over `range`.
template <class Fn>
QuadResult integrate_1d(const Fn& fn, Interval range, Rule rule, const std::vector<double>& splits,
                        std::size_t n, double target_tol = 1e-6, bool graded = false)
{
    const detail::Sum fine = detail::rule_sum(fn, range, rule, splits, n, graded);
    const detail::Sum coarse = detail::rule_sum(fn, range, rule, splits, n / 2, graded);
    return detail::finish(fine, coarse, target_tol);
}

/// Integral of fn(KPoint) over spec.kx x spec.ky.
template <class Fn>
QuadResult integrate_2d(const Fn& fn, const QuadratureSpec& spec)
{
    spec.validate();
    if (spec.reduce_ky) {
        const double y0 = spec.ky.lo;
        const double ly = spec.ky.length();
        auto line = [&](double x) { return fn(KPoint(x, y0)); };
        const detail::Sum fine =
            detail::rule_sum(line, spec.kx, spec.rule, spec.split_points, spec.n_points, spec.graded);
        const detail::Sum coarse =
            detail::rule_sum(line, spec.kx, spec.rule, spec.split_points, spec.n_points / 2, spec.graded);
        return detail::finish({ly * fine.value, ly * fine.magnitude}, {ly * coarse.value, ly * coarse.magnitude},
                              spec.target_tol);
    }

    const Rule y_rule = detail::is_full_period(spec.ky) ? Rule::midpoint_periodic : Rule::composite_simpson;
    auto grid_sum = [&](std::size_t n) {
        detail::Sum magnitude_acc;
        auto row = [&](double y) {
            auto line = [&](double x) { return fn(KPoint(x, y)); };
            const detail::Sum s = detail::rule_sum(line, spec.kx, spec.rule, spec.split_points, n, spec.graded);
            magnitude_acc.magnitude += s.magnitude;
            return s.value;
        };
        detail::Sum outer = detail::rule_sum(row, spec.ky, y_rule, {}, n);
        // The inner magnitudes are unweighted in y; scale by the mean y weight.
        outer.magnitude = std::max(outer.magnitude, magnitude_acc.magnitude * spec.ky.length() / static_cast<double>(n));
        return outer;
    };
    return detail::finish(grid_sum(spec.n_points), grid_sum(spec.n_points / 2), spec.target_tol);
}

}  // namespace qgeom
