#include "carleman/time_evolution.hpp"

#include "carleman/error.hpp"

#include <cmath>
#include <cstdio>

namespace carleman {

namespace {

// Spectral mass allowed within support_gap of 0 and +-k_0.
constexpr double support_gap = 0.02;
constexpr double support_leak = 1e-6;

// Relative mass allowed to leave the window during propagation.
constexpr double spill_tolerance = 1e-6;

void check_support(const MellinSpectrum& spectrum) {
    double total = 0.0;
    double near = 0.0;
    for (std::size_t m = 0; m < spectrum.size(); ++m) {
        const double a = std::abs(spectrum.k(m));
        const double v = std::norm(spectrum.values()[m]);
        total += v;
        if (a < support_gap || std::abs(a - k_zero) < support_gap) near += v;
    }
    require(total > 0.0 && near <= support_leak * total, ErrorKind::precondition,
            "spectrum must vanish near k = 0 and k = +-k_0 for the stationary-phase form");
}

StationaryData solve(double tau) {
    StationaryData d;
    d.tau = tau;
    const double a = std::abs(tau);
    const double root = std::sqrt((1.0 - a) * (1.0 + a));
    // sigma_1 = 1 - sqrt(1 - tau^2) without cancellation.
    d.sigma[0] = tau * tau / (1.0 + root);
    d.sigma[1] = 1.0 + root;
    const double sgn = tau > 0.0 ? 1.0 : -1.0;
    for (int j = 0; j < 2; ++j) {
        const double s = d.sigma[j];
        const double p = s + std::sqrt(2.0 * s);
        d.k[j] = sgn * std::log(p / a) / pi;
        d.lambda[j] = 2.0 * pi * a * p / (p * p + tau * tau);
        const double sign = j == 0 ? -1.0 : 1.0;
        d.lambda_second[j] = sign * pi * pi * pi * a * std::sqrt((1.0 - a) * (1.0 + a) / (2.0 * s));
        d.omega[j] = pi * pi * d.k[j] * tau / 2.0 + d.lambda[j];
    }
    return d;
}

} // namespace

double lambda_prime(double k) {
    require(std::isfinite(k), ErrorKind::domain, "k must be finite");
    const double s = std::sinh(pi * std::abs(k));
    const double v = -pi * pi * s / (1.0 + s * s);
    return k < 0.0 ? -v : v;
}

double lambda_second(double k) {
    require(std::isfinite(k), ErrorKind::domain, "k must be finite");
    const double x = pi * std::abs(k);
    const double s = std::sinh(x);
    const double c = std::cosh(x);
    return -pi * pi * pi * (1.0 - s * s) / (c * c * c);
}

double tau_of(double t, double T) {
    require(std::isfinite(t) && t > 0.0, ErrorKind::domain, "t must be positive");
    require(std::isfinite(T) && T != 0.0, ErrorKind::domain, "T must be nonzero");
    return -2.0 * std::log(t) / (pi * pi * T);
}

StationaryData stationary_points(double tau, const GuardBands& guards) {
    require(std::isfinite(tau) && tau != 0.0 && std::abs(tau) < 1.0, ErrorKind::domain,
            "stationary points exist only for 0 < |tau| < 1");
    require(std::abs(tau) > guards.near_zero, ErrorKind::precondition,
            "tau within the guard band at 0: stationary points escape to infinity");
    require(1.0 - std::abs(tau) > guards.near_one, ErrorKind::precondition,
            "tau within the guard band at 1: stationary points coalesce at k_0");
    return solve(tau);
}

VectorC propagate_exact(const LogGrid& grid, const VectorC& g, double T) {
    require(std::isfinite(T), ErrorKind::domain, "T must be finite");
    if (T == 0.0) return g;
    // Propagate on a window of twice the length: whatever lands in the
    // extension has left the original window.
    const std::size_t n = grid.size();
    const LogGrid padded(grid.x_min(), grid.x_min() + static_cast<double>(2 * n - 1) * grid.step(), 2 * n);
    VectorC work = VectorC::Zero(2 * n);
    work.head(n) = g;
    MellinSpectrum spec = mellin_forward(padded, work);
    for (std::size_t m = 0; m < spec.size(); ++m)
        spec.values()[m] *= std::polar(1.0, -lambda_of_k(std::abs(spec.k(m))) * T);
    const VectorC out = mellin_inverse(padded, spec);
    const double total = out.squaredNorm();
    const double spilled = out.tail(n).squaredNorm();
    if (spilled > spill_tolerance * total) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "evolved state leaves the window (mass fraction %.2e); widen the grid to |x| ~ pi^2 |T| / 2",
                      spilled / total);
        fail(ErrorKind::grid_too_small, msg);
    }
    return out.head(n);
}

namespace {

// sqrt(t) (U_j f)(t) for both j.
StationaryPhaseValue terms_log(const MellinSpectrum& spectrum, double T, double x,
                               const GuardBands& guards) {
    StationaryPhaseValue out;
    const double tau = -2.0 * x / (pi * pi * T);
    if (!(std::abs(tau) < 1.0) || tau == 0.0) return out;
    const double a = std::abs(tau);
    out.reliable = a > guards.near_zero && 1.0 - a > guards.near_one;
    const StationaryData d = solve(tau);
    const double scale = 1.0 / std::sqrt(std::abs(T));
    const double quarter = (T > 0.0 ? 1.0 : -1.0) * pi / 4.0;
    for (int j = 0; j < 2; ++j) {
        const cplx delta = std::polar(1.0, j == 0 ? quarter : -quarter);
        const cplx term = scale * delta * std::polar(1.0, -d.omega[j] * T) /
                          std::sqrt(std::abs(d.lambda_second[j])) * spectrum.evaluate(d.k[j]);
        (j == 0 ? out.u1 : out.u2) = term;
    }
    return out;
}

void check_time(double T) {
    require(std::isfinite(T) && std::abs(T) >= min_asymptotic_time, ErrorKind::precondition,
            "stationary-phase form needs |T| >= 10");
}

} // namespace

StationaryPhaseValue propagate_stationary_phase(const MellinSpectrum& spectrum, double T, double t,
                                                const GuardBands& guards) {
    check_time(T);
    require(std::isfinite(t) && t > 0.0, ErrorKind::domain, "t must be positive");
    check_support(spectrum);
    StationaryPhaseValue v = terms_log(spectrum, T, std::log(t), guards);
    const double inv = 1.0 / std::sqrt(t);
    v.u1 *= inv;
    v.u2 *= inv;
    return v;
}

StationaryPhaseField stationary_phase_on_grid(const LogGrid& grid, const MellinSpectrum& spectrum,
                                              double T, const GuardBands& guards) {
    check_time(T);
    check_support(spectrum);
    StationaryPhaseField field{VectorC::Zero(grid.size()), VectorC::Zero(grid.size()),
                               std::vector<bool>(grid.size(), true)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const StationaryPhaseValue v = terms_log(spectrum, T, grid.x(i), guards);
        field.u1[i] = v.u1;
        field.u2[i] = v.u2;
        field.reliable[i] = v.reliable;
    }
    return field;
}

std::array<double, 2> band_norms_squared(const MellinSpectrum& spectrum) {
    std::array<double, 2> out{0.0, 0.0};
    for (std::size_t m = 0; m < spectrum.size(); ++m) {
        const double v = std::norm(spectrum.values()[m]) * spectrum.dk();
        out[std::abs(spectrum.k(m)) < k_zero ? 0 : 1] += v;
    }
    return out;
}

} // namespace carleman
