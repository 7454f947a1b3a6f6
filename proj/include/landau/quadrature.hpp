#pragma once

// Adaptive Gauss-Kronrod (G7/K15) integration and a hierarchical Simpson rule.
//
// The adaptive driver follows the QUADPACK qag/qagp strategy: keep a heap of
// subintervals ordered by their error estimate, bisect the worst one until the
// summed estimate is below max(abs_tol, rel_tol * |I|). Works for real and
// std::complex<double> integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "landau/errors.hpp"

namespace landau::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
    bool converged = true;
};

struct Tolerance {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes kronrod_nodes[1], [3], [5] and the centre.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double error;
    friend bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }
};

template <class F>
auto kronrod15(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    const T fc = f(centre);
    T res_k = fc * kronrod_weights[7];
    T res_g = fc * gauss_weights[3];
    double res_abs = std::abs(fc) * kronrod_weights[7];

    std::array<T, 7> f1{};
    std::array<T, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const T sum = f1[j] + f2[j];
        res_k += kronrod_weights[j] * sum;
        res_abs += kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) res_g += gauss_weights[j / 2] * sum;
    }
    const T mean = res_k * 0.5;
    double res_asc = kronrod_weights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const T integral = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    return Segment<T>{a, b, integral, err};
}

} // namespace detail

/// Integrate f over [a, b], with the interval pre-split at `breakpoints`
/// (points outside (a, b) are ignored). Never throws; check `converged`.
template <class F>
auto integrate(F&& f, double a, double b, std::span<const double> breakpoints,
               const Tolerance& tol = {}) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    if (a == b) return out;

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > std::min(a, b) && p < std::max(a, b)) cuts.push_back(p);
    cuts.push_back(b);
    if (a < b)
        std::sort(cuts.begin(), cuts.end());
    else
        std::sort(cuts.begin(), cuts.end(), std::greater<>{});
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::Segment<T>> heap;
    heap.reserve(cuts.size() + 64);
    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(detail::kronrod15(f, cuts[i], cuts[i + 1]));
        total += heap.back().value;
        total_err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end());
    out.evaluations = 15 * static_cast<int>(heap.size());

    auto target = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };
    while (total_err > target()) {
        if (out.subdivisions >= tol.max_subdivisions) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        // Interval collapsed to rounding resolution: nothing more to gain.
        if (std::abs(worst.b - worst.a) < 1e3 * std::numeric_limits<double>::epsilon()
                                               * std::max(1.0, std::abs(mid))) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            out.converged = false;
            break;
        }
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++out.subdivisions;
        out.evaluations += 30;
    }

    // Re-sum to shed the drift of the running updates.
    total = T{};
    total_err = 0.0;
    for (const auto& s : heap) {
        total += s.value;
        total_err += s.error;
    }
    out.value = total;
    out.error = total_err;
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    return integrate(std::forward<F>(f), a, b, std::span<const double>{}, tol);
}

/// As integrate(), but throws QuadratureFailure when the tolerance is missed.
template <class F>
auto integrate_or_throw(F&& f, double a, double b, std::span<const double> breakpoints,
                        const Tolerance& tol, const char* what) {
    auto r = integrate(std::forward<F>(f), a, b, breakpoints, tol);
    if (!r.converged) throw QuadratureFailure(what, r.error);
    return r.value;
}

template <class F>
auto integrate_or_throw(F&& f, double a, double b, const Tolerance& tol, const char* what) {
    return integrate_or_throw(std::forward<F>(f), a, b, std::span<const double>{}, tol, what);
}

/// Composite Simpson on [a, b] with refinement by interval doubling. Each
/// level reuses the previous nodes; stops when two successive levels agree to
/// max(abs_tol, rel_tol |S|). `n_start` must be even.
template <class F>
auto simpson_doubling(F&& f, double a, double b, int n_start, int n_max, double rel_tol,
                      double abs_tol) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    int n = std::max(2, n_start + (n_start % 2));
    double h = (b - a) / n;

    // trapezoid sum bookkeeping: ends + interior
    const T ends = f(a) + f(b);
    T odd{}, even{};
    for (int i = 1; i < n; ++i) (i % 2 ? odd : even) += f(a + i * h);
    out.evaluations = n + 1;
    T interior = odd + even;
    T trap_prev = (ends * 0.5 + interior) * h;
    T simpson_prev = (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);

    while (true) {
        if (2 * n > n_max) {
            out.value = simpson_prev;
            out.converged = false;
            return out;
        }
        T mids{};
        for (int i = 0; i < n; ++i) mids += f(a + (i + 0.5) * h);
        out.evaluations += n;
        interior += mids;
        n *= 2;
        h *= 0.5;
        const T trap = (ends * 0.5 + interior) * h;
        const T simpson = (4.0 * trap - trap_prev) / 3.0;
        out.error = std::abs(simpson - simpson_prev);
        out.subdivisions = n;
        if (out.error <= std::max(abs_tol, rel_tol * std::abs(simpson))) {
            out.value = simpson;
            return out;
        }
        trap_prev = trap;
        simpson_prev = simpson;
    }
}

/// Composite trapezoid on [a, b] refined by interval doubling until two
/// successive levels agree to max(abs_tol, rel_tol |T|). For smooth integrands
/// that are negligible at both ends the error falls off exponentially in n.
template <class F>
auto trapezoid_doubling(F&& f, double a, double b, int n_start, int n_max, double rel_tol, double abs_tol) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    int n = std::max(1, n_start);
    double h = (b - a) / n;
    T sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) sum += f(a + i * h);
    out.evaluations = n + 1;
    T prev = sum * h;

    while (true) {
        if (2 * n > n_max) {
            out.value = prev;
            out.converged = false;
            return out;
        }
        for (int i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
        out.evaluations += n;
        n *= 2;
        h *= 0.5;
        const T next = sum * h;
        out.error = std::abs(next - prev);
        out.subdivisions = n;
        if (out.error <= std::max(abs_tol, rel_tol * std::abs(next))) {
            out.value = next;
            return out;
        }
        prev = next;
    }
}

/// Composite Simpson weights for n (even) intervals; returns the weighted sum.
template <class T>
T simpson_sum(std::span<const T> samples, double h) {
    const std::size_t n = samples.size() - 1;
    T acc = samples.front() + samples.back();
    for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * samples[i];
    return acc * (h / 3.0);
}

} // namespace landau::quad
