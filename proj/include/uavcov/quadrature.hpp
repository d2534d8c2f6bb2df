#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>

namespace uavcov {

/// Raised when an adaptive integral cannot reach its tolerance. The message
/// names the offending sub-integral.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 30;
    /// Truncation radius of the semi-infinite outer integrals, in meters.
    /// 0 selects the radius automatically from the tail-mass bound.
    double r_max = 0.0;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureSettings: tolerances must be > 0");
        if (max_depth < 1)
            throw std::invalid_argument("QuadratureSettings: max_depth must be >= 1");
        if (r_max < 0.0 || !std::isfinite(r_max))
            throw std::invalid_argument("QuadratureSettings: r_max must be finite and >= 0");
    }
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (positive half), QUADPACK dqk15.
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

} // namespace detail

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// One 15-point Gauss-Kronrod panel on [a, b] with the QUADPACK error
/// estimate. Never evaluates f at the endpoints.
template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    double fc = f(center);
    fv[14] = fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * detail::gk_nodes[i];
        fv[2 * i] = f(center - dx);
        fv[2 * i + 1] = f(center + dx);
    }

    double resk = detail::gk_weights[7] * fc;
    double resabs = std::fabs(resk);
    for (int i = 0; i < 7; ++i) {
        const double pair = fv[2 * i] + fv[2 * i + 1];
        resk += detail::gk_weights[i] * pair;
        resabs += detail::gk_weights[i] * (std::fabs(fv[2 * i]) + std::fabs(fv[2 * i + 1]));
    }
    double resg = detail::gauss_weights[3] * fc;
    for (int i = 0; i < 3; ++i)
        resg += detail::gauss_weights[i] * (fv[2 * (2 * i + 1)] + fv[2 * (2 * i + 1) + 1]);

    const double reskh = 0.5 * resk;
    double resasc = detail::gk_weights[7] * std::fabs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += detail::gk_weights[i] * (std::fabs(fv[2 * i] - reskh) + std::fabs(fv[2 * i + 1] - reskh));

    double err = std::fabs((resk - resg) * half);
    resasc *= std::fabs(half);
    resabs *= std::fabs(half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);

    return {resk * half, err};
}

namespace detail {

struct AdaptiveInterval {
    double a, b, value, error;
    int depth;
    bool operator<(const AdaptiveInterval& o) const { return error < o.error; }
};

[[noreturn]] inline void quadrature_failure(const char* label, double a, double b,
                                            double err, double tol)
{
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "%s: adaptive quadrature did not converge (interval [%g, %g], err=%.3e, tol=%.3e)",
                  label, a, b, err, tol);
    throw NumericalError(msg);
}

} // namespace detail

/// Adaptive integral of f on [a, b]: worst-interval-first bisection of
/// Gauss-Kronrod panels. Throws NumericalError (tagged with `label`) if the
/// tolerance cannot be met within max_depth bisections per interval.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSettings& settings,
                 const char* label = "integral")
{
    if (a == b)
        return 0.0;

    std::priority_queue<detail::AdaptiveInterval> queue;
    const PanelEstimate whole = gauss_kronrod_15(f, a, b);
    queue.push({a, b, whole.value, whole.error, 0});
    double total_value = whole.value;
    double total_error = whole.error;

    constexpr std::size_t max_intervals = 20000;
    while (total_error > std::max(settings.abs_tol, settings.rel_tol * std::fabs(total_value))) {
        const detail::AdaptiveInterval worst = queue.top();
        queue.pop();
        if (worst.depth >= settings.max_depth)
            detail::quadrature_failure(label, worst.a, worst.b, worst.error, settings.abs_tol);
        if (queue.size() + 2 > max_intervals)
            detail::quadrature_failure(label, a, b, total_error, settings.abs_tol);

        const double mid = 0.5 * (worst.a + worst.b);
        const PanelEstimate left = gauss_kronrod_15(f, worst.a, mid);
        const PanelEstimate right = gauss_kronrod_15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error, worst.depth + 1});
        queue.push({mid, worst.b, right.value, right.error, worst.depth + 1});
    }

    return total_value;
}

/// Adaptive integral over consecutive segments [pts[0], pts[1]], ... .
/// Splitting at known derivative kinks keeps the bisection shallow.
template <class F>
double integrate_segments(F&& f, std::span<const double> pts, const QuadratureSettings& settings,
                          const char* label = "integral")
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], settings, label);
    return total;
}

} // namespace uavcov
