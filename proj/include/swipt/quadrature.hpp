// Adaptive Gauss-Kronrod (G7/K15) quadrature for smooth one-dimensional
// integrands.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace swipt {

namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule
inline constexpr double kronrod_x[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691, 0.741531185599394,
    0.864864423359769, 0.949107912342759, 0.991455371120813};
inline constexpr double kronrod_w[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double value;
    double error;
};

template <typename F>
GkResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kronrod_x[i]);
        fk += kronrod_w[i] * v;
        if (i % 2 == 1) fg += gauss_w[i / 2] * v;
    }
    return {h * fk, std::abs(h * (fk - fg))};
}

// Integrands with near-step features (conditional SER vs fading gain) never
// satisfy the local tolerance at any depth around the step; at the depth cap
// the sliver is so narrow that its residual error is bounded by its width, so
// the Kronrod value is accepted. A gross residual still raises.
template <typename F>
double gk_adaptive(const F& f, double a, double b, double abs_tol, int depth) {
    const GkResult r = gk15(f, a, b);
    if (r.error <= abs_tol) return r.value;
    if (depth >= 20) {
        if (r.error > 1e-2) throw std::runtime_error("quadrature failed to converge");
        return r.value;
    }
    const double m = 0.5 * (a + b);
    return gk_adaptive(f, a, m, abs_tol / 2.0, depth + 1) +
           gk_adaptive(f, m, b, abs_tol / 2.0, depth + 1);
}

} // namespace detail

template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-6) {
    if (!(b > a)) return 0.0;
    return detail::gk_adaptive(f, a, b, abs_tol, 0);
}

// Non-adaptive composite rule for integrands with dense micro-steps (e.g.
// high-SNR error-rate staircases vs the fading gain), where adaptive
// refinement degenerates into near-exhaustive bisection. Error is bounded by
// the total variation times the panel width.
template <typename F>
double integrate_composite(const F& f, double a, double b, int panels) {
    if (!(b > a)) return 0.0;
    if (panels < 1) throw std::invalid_argument("panels must be >= 1");
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i)
        acc += detail::gk15(f, a + i * h, a + (i + 1) * h).value;
    return acc;
}

} // namespace swipt
