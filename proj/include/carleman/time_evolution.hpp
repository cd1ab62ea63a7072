#pragma once

// The unitary group exp(-iCT): exact propagation through the Mellin
// multiplier e^{-i lambda(k) T}, and its large-|T| stationary-phase form
// U_1(T) + U_2(T).
//
// For T != 0 and t in (e^{-pi^2|T|/2}, e^{pi^2|T|/2}) set
//   tau = -2 ln t / (pi^2 T),
// so that the stationary points k_j(tau) solve lambda'(k) = -pi^2 tau / 2.
// k_1 lies between 0 and k_0 = ln(1 + sqrt 2)/pi, k_2 beyond k_0.

#include "carleman/mellin.hpp"

#include <array>

namespace carleman {

inline constexpr double k_zero = 0.28054992616959006; // ln(1 + sqrt 2) / pi
inline constexpr double min_asymptotic_time = 10.0;

struct GuardBands {
    double near_zero = 0.02; // |tau| <= near_zero: stationary points run off to infinity
    double near_one = 0.02;  // 1 - |tau| <= near_one: the two points coalesce at +-k_0
};

double lambda_prime(double k);
double lambda_second(double k);

// Index 0 holds j = 1, index 1 holds j = 2.
struct StationaryData {
    double tau = 0.0;
    std::array<double, 2> sigma{};
    std::array<double, 2> k{};
    std::array<double, 2> omega{};
    std::array<double, 2> lambda{};
    std::array<double, 2> lambda_second{};
};

// Throws domain for tau = 0 or |tau| >= 1 (no stationary points) and
// precondition when tau falls in a guard band.
StationaryData stationary_points(double tau, const GuardBands& guards = {});

// tau for given t and T.
double tau_of(double t, double T);

// Exact exp(-iCT) on g-samples. Throws grid_too_small when the result
// carries mass to the window ends.
VectorC propagate_exact(const LogGrid& grid, const VectorC& g, double T);

struct StationaryPhaseValue {
    cplx u1 = 0.0;
    cplx u2 = 0.0;
    bool reliable = true;

    cplx value() const { return u1 + u2; }
};

// (U_1(T) f)(t) and (U_2(T) f)(t) from the spectrum of f. Zero outside the
// window |tau| < 1. Inside a guard band the terms are still evaluated but
// flagged unreliable. Requires |T| >= min_asymptotic_time and a spectrum
// vanishing near 0 and +-k_0 (precondition errors otherwise).
StationaryPhaseValue propagate_stationary_phase(const MellinSpectrum& spectrum, double T, double t,
                                                const GuardBands& guards = {});

// The two terms on a whole grid, as g-samples (multiplied by sqrt t).
struct StationaryPhaseField {
    VectorC u1;
    VectorC u2;
    std::vector<bool> reliable;
};

StationaryPhaseField stationary_phase_on_grid(const LogGrid& grid, const MellinSpectrum& spectrum,
                                              double T, const GuardBands& guards = {});

// (\int_{|k|<k_0} |F|^2 dk, \int_{|k|>k_0} |F|^2 dk) from the spectrum samples.
std::array<double, 2> band_norms_squared(const MellinSpectrum& spectrum);

} // namespace carleman
