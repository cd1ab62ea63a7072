#pragma once

// Shared test data: smooth compactly supported spectra and grids.

#include "carleman/error.hpp"
#include "carleman/mellin.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace fixtures {

using namespace carleman;

// C-infinity bump on (a, b), peak value 1.
inline double bump(double k, double a, double b) {
    if (k <= a || k >= b) return 0.0;
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double y = (k - c) / r;
    return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

// g-samples of the state whose spectrum is the sum of bumps on the given
// intervals.
inline VectorC bump_state(const LogGrid& grid, const std::vector<std::pair<double, double>>& supports,
                          std::size_t oversample = 8) {
    return synthesize_state(
        grid,
        [&](double k) {
            double v = 0.0;
            for (auto [a, b] : supports) v += bump(k, a, b);
            return cplx(v);
        },
        oversample);
}

// Exact squared norm of the bump spectrum, by fine quadrature in k.
inline double bump_norm_squared(const std::vector<std::pair<double, double>>& supports) {
    double acc = 0.0;
    for (auto [a, b] : supports) {
        const int m = 200000;
        const double dk = (b - a) / m;
        for (int i = 1; i < m; ++i) acc += std::pow(bump(a + i * dk, a, b), 2) * dk;
    }
    return acc;
}

template <class F>
bool throws_kind(ErrorKind kind, F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace fixtures
