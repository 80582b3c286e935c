#pragma once

#include <cmath>
#include <utility>

namespace lrace {

/// Deterministic golden-section maximization on [lo, hi].
/// Shrinks the bracket to width <= tol and returns the best evaluated point.
/// The caller is expected to have bracketed a local maximum (e.g. by a grid
/// pass); on monotone sections the search converges to the better endpoint.
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.61803398874989484820;  // 1/phi
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return (f1 >= f2) ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace lrace
