#include "carleman/error.hpp"
#include "carleman/spectral_core.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace carleman;

namespace {

constexpr cplx I{0.0, 1.0};

// phi(z) = z sqrt(1 - pi^2/z^2): the principal root is analytic off [-pi, pi]
// and positive for z > pi, so this needs no branch bookkeeping.
cplx phi_oracle(cplx z) { return z * std::sqrt(1.0 - pi * pi / (z * z)); }

cplx k_oracle(cplx z) {
    const cplx q = (pi - I * phi_oracle(z)) / z;
    double arg = std::atan2(q.imag(), q.real());
    if (arg <= 0.0) arg += 2.0 * pi;
    return cplx(std::log(std::abs(q)), arg) / pi;
}

// Two-term formula for rho, usable away from u = 1.
cplx rho_oracle(double u, cplx bold_k) {
    const double l = std::log(u);
    return std::exp(I * bold_k * l) / (1.0 / (u * u) - 1.0) + std::exp(-I * bold_k * l) / (u * u - 1.0);
}

std::vector<cplx> sample_points() {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> re(-6.0, 8.0);
    std::uniform_real_distribution<double> im(-3.0, 3.0);
    std::vector<cplx> out;
    while (out.size() < 40) {
        const cplx z(re(gen), im(gen));
        if (std::abs(z.imag()) < 0.05) continue;
        out.push_back(z);
    }
    out.emplace_back(2.0 * pi, 0.0);
    out.emplace_back(-5.0, 0.0);
    return out;
}

bool throws_kind(ErrorKind kind, auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace

TEST_CASE("dispersion relation values") {
    CHECK(lambda_of_k(0.0) == doctest::Approx(pi).epsilon(1e-15));
    const double k0 = std::log(1.0 + std::sqrt(2.0)) / pi;
    CHECK(std::abs(lambda_of_k(k0) - pi / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(lambda_of_k(1.0) - 0.271014951399418348) < 1e-14);
    CHECK(k_of_lambda(pi) == 0.0);
    CHECK(std::abs(k_of_lambda(pi / std::sqrt(2.0)) - k0) < 1e-14);
    CHECK(throws_kind(ErrorKind::domain, [] { lambda_of_k(-1.0); }));
    CHECK(throws_kind(ErrorKind::domain, [] { lambda_of_k(NAN); }));
    CHECK(throws_kind(ErrorKind::domain, [] { k_of_lambda(0.0); }));
    CHECK(throws_kind(ErrorKind::domain, [] { k_of_lambda(3.2); }));
}

TEST_CASE("dispersion round trip and monotonicity") {
    double prev = lambda_of_k(0.0);
    for (int i = 0; i < 200; ++i) {
        const double lambda = pi * std::pow(10.0, -8.0 * i / 199.0);
        CHECK(std::abs(lambda_of_k(k_of_lambda(lambda)) - lambda) < 1e-12);
        const double k = 0.05 * (i + 1);
        const double l = lambda_of_k(k);
        CHECK(l < prev);
        prev = l;
    }
}

TEST_CASE("small-energy behavior of k") {
    for (double lambda : {1e-2, 1e-3}) {
        const double approx = -std::log(lambda) / pi + std::log(2.0 * pi) / pi;
        CHECK(std::abs(k_of_lambda(lambda) - approx) < lambda * lambda);
    }
}

TEST_CASE("branch of bold k on the boundary") {
    CHECK(branch_k(SpectralPoint::boundary(pi, Side::plus)) == cplx(0.0, 2.0));
    CHECK(branch_k(SpectralPoint::boundary(-pi, Side::plus)) == cplx(0.0, 1.0));
    CHECK(branch_k(SpectralPoint::off_cut(-pi)) == cplx(0.0, 1.0));
    const cplx k2pi = branch_k(SpectralPoint::off_cut(2.0 * pi));
    CHECK(std::abs(k2pi - cplx(0.0, 5.0 / 3.0)) < 1e-14);
    for (double lambda : {0.3, 1.0, 2.5, -0.4, -2.0, -3.0}) {
        const auto p = SpectralPoint::boundary(lambda, Side::plus);
        const auto m = SpectralPoint::boundary(lambda, Side::minus);
        CHECK(p.bold_k().imag() == (lambda > 0 ? 2.0 : 1.0));
        CHECK(std::abs(m.bold_k() + std::conj(p.bold_k())) < 1e-15);
        CHECK(std::abs(p.phi() - cplx(0.0, std::sqrt(pi * pi - lambda * lambda))) < 1e-14);
    }
    CHECK(throws_kind(ErrorKind::ambiguity, [] { SpectralPoint::off_cut(-1.0).bold_k(); }));
    CHECK(throws_kind(ErrorKind::domain, [] { SpectralPoint::off_cut(1.0); }));
    CHECK(throws_kind(ErrorKind::domain, [] { SpectralPoint::boundary(0.0, Side::plus); }));
}

TEST_CASE("boundary values are limits of off-cut values") {
    for (double lambda : {0.5, 2.0, 3.0, -0.7, -2.5}) {
        for (Side side : {Side::plus, Side::minus}) {
            const double eps = side == Side::plus ? 1e-10 : -1e-10;
            const auto near = SpectralPoint::off_cut(cplx(lambda, eps));
            const auto edge = SpectralPoint::boundary(lambda, side);
            CHECK(std::abs(near.bold_k() - edge.bold_k()) < 1e-6);
            CHECK(std::abs(near.phi() - edge.phi()) < 1e-6);
            CHECK(std::abs(near.theta() - edge.theta()) < 1e-6);
        }
    }
}

TEST_CASE("branch quantities match an independent branch construction") {
    for (cplx z : sample_points()) {
        const auto p = SpectralPoint::off_cut(z);
        CHECK(std::abs(p.phi() - phi_oracle(z)) < 1e-12 * (1.0 + std::abs(z)));
        CHECK(std::abs(p.bold_k() - k_oracle(z)) < 1e-12);
        CHECK(p.bold_k().imag() > 0.0);
        CHECK(p.bold_k().imag() < 2.0);
        CHECK(std::abs(p.theta() - (2.0 + I * p.bold_k())) < 1e-13);
        const auto c = SpectralPoint::off_cut(std::conj(z));
        CHECK(std::abs(c.phi() - std::conj(p.phi())) < 1e-12);
        CHECK(std::abs(c.bold_k() + std::conj(p.bold_k())) < 1e-12);
    }
    CHECK(SpectralPoint::off_cut(5.0).phi().real() > 0.0);
    CHECK(SpectralPoint::off_cut(-5.0).phi().real() < 0.0);
}

TEST_CASE("rho against the two-term formula and its symmetries") {
    for (cplx z : sample_points()) {
        const auto p = SpectralPoint::off_cut(z);
        const auto c = SpectralPoint::off_cut(std::conj(z));
        for (double u : {0.01, 0.3, 0.8, 1.5, 4.0, 50.0}) {
            const cplx r = rho(u, p);
            CHECK(std::abs(r - rho_oracle(u, k_oracle(z))) < 1e-11 * (1.0 + std::abs(r)));
            CHECK(std::abs(rho(1.0 / u, p) - r) < 1e-12 * (1.0 + std::abs(r)));
            CHECK(std::abs(rho(u, c) - std::conj(r)) < 1e-12 * (1.0 + std::abs(r)));
        }
        CHECK(std::abs(rho(1.0, p) - (-1.0 - I * p.bold_k())) < 1e-12);
    }
    CHECK(std::abs(rho(1.0, SpectralPoint::off_cut(2.0 * pi)) - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("rho series path joins the direct formula") {
    for (cplx z : {cplx(2.0, 1.0), cplx(-4.0, 0.5), cplx(3.5, 0.0)}) {
        const auto p = SpectralPoint::off_cut(z);
        const double below = rho_log(0.999e-3, p).real();
        const double above = rho_log(1.001e-3, p).real();
        CHECK(std::abs(below - above) < 1e-5);
        // Direct formula evaluated in long double as the reference.
        const long double w = 0.9e-3L;
        const std::complex<long double> th(p.theta().real(), p.theta().imag());
        const auto ref = (std::exp(-th * w) - std::exp((th - 2.0L) * w)) / (1.0L - std::exp(-2.0L * w));
        const cplx got = rho_log(static_cast<double>(w), p);
        CHECK(std::abs(got - cplx(double(ref.real()), double(ref.imag()))) < 1e-11);
    }
}

TEST_CASE("rho boundary value on the negative half of the cut") {
    const double k = std::log(2.0 + std::sqrt(3.0)) / pi;
    const cplx expected = 2.0 * I * std::sin(k * std::log(2.0)) / (-1.5);
    const cplx got = rho(2.0, SpectralPoint::boundary(-pi / 2.0, Side::plus));
    CHECK(std::abs(got - expected) < 1e-14);
    CHECK(std::abs(expected - cplx(0.0, -0.381995021314725476)) < 1e-14);
}

TEST_CASE("rho tilde equals rho minus one above pi") {
    for (double lambda : {pi + 1e-3, pi + 0.1, 5.0, 20.0}) {
        const auto p = SpectralPoint::off_cut(lambda);
        const double theta = p.theta().real();
        CHECK(std::abs(p.theta().imag()) < 1e-15);
        CHECK(std::abs(theta - std::atan(std::sqrt(lambda * lambda - pi * pi) / pi) / pi) < 1e-14);
        for (double w : {0.0, 1e-4, 0.5, 3.0, 30.0}) {
            CHECK(std::abs(rho_tilde_log(w, theta) - (rho_log(w, p).real() - 1.0)) < 1e-12);
        }
        CHECK(std::isfinite(rho_tilde_log(800.0, theta)));
    }
}

TEST_CASE("resolvent kernel closed forms on the negative axis") {
    const auto endpoint = SpectralPoint::off_cut(-pi);
    const double expected = 2.0 / (pi * pi) * std::sqrt(2.0) / (1.0 - 4.0) * std::log(2.0);
    CHECK(std::abs(resolvent_kernel(2.0, 1.0, endpoint).real() - expected) < 1e-14);
    CHECK(std::abs(expected - (-0.0662139435808491707)) < 1e-15);
    CHECK(std::abs(resolvent_kernel(1.0, 1.0, endpoint).real() + 1.0 / (pi * pi)) < 1e-15);

    for (double lambda : {-0.5, -1.0, -3.0}) {
        const double k = k_of_lambda(-lambda);
        for (auto [t, s] : {std::pair{2.0, 1.0}, std::pair{0.1, 3.0}, std::pair{1.0, 1.0 + 1e-9}}) {
            const double closed = 2.0 / std::sqrt(pi * pi - lambda * lambda) * std::sqrt(t * s) /
                                  (s * s - t * t) * std::sin(k * std::log(t / s));
            const cplx a = resolvent_kernel(t, s, SpectralPoint::off_cut(lambda));
            CHECK(std::abs(a - closed) < 1e-7 * (1.0 + std::abs(closed)));
            CHECK(a.imag() == 0.0);
        }
    }
}

TEST_CASE("resolvent kernel is analytic across the negative part of the cut") {
    for (double lambda : {-0.3, -1.7, -3.1}) {
        const auto plus = SpectralPoint::boundary(lambda, Side::plus);
        const auto minus = SpectralPoint::boundary(lambda, Side::minus);
        const auto real = SpectralPoint::off_cut(lambda);
        const auto above = SpectralPoint::off_cut(cplx(lambda, 1e-9));
        for (double w : {0.0, 0.2, 1.5, -4.0}) {
            const cplx ar = resolvent_kernel_log(w, real);
            CHECK(std::abs(resolvent_kernel_log(w, plus) - ar) < 1e-12);
            CHECK(std::abs(resolvent_kernel_log(w, minus) - ar) < 1e-12);
            CHECK(std::abs(resolvent_kernel_log(w, above) - ar) < 1e-6);
        }
    }
}

TEST_CASE("resolvent kernel symmetry and boundedness of rho") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> ts(0.05, 20.0);
    for (cplx z : sample_points()) {
        const auto p = SpectralPoint::off_cut(z);
        for (int i = 0; i < 5; ++i) {
            const double t = ts(gen), s = ts(gen);
            CHECK(std::abs(resolvent_kernel(t, s, p) - resolvent_kernel(s, t, p)) <
                  1e-13 * (1.0 + std::abs(resolvent_kernel(t, s, p))));
        }
    }
    // sup over u of |rho| on a compact set of z stays finite and moderate.
    double sup = 0.0;
    for (double re = -6.0; re <= 8.0; re += 0.5)
        for (double im : {-2.0, -0.5, 0.5, 2.0})
            for (double w = -30.0; w <= 30.0; w += 0.25)
                sup = std::max(sup, std::abs(rho_log(w, SpectralPoint::off_cut(cplx(re, im)))));
    CHECK(std::isfinite(sup));
    CHECK(sup < 10.0);
}

TEST_CASE("spectral density") {
    CHECK(std::abs(spectral_density(1.0, 1.0, pi / 2.0) - 4.0 / (std::sqrt(3.0) * pi * pi * pi)) < 1e-15);
    CHECK(std::abs(spectral_density(1.0, 1.0, pi / 2.0) - 0.0744817283471448379) < 1e-15);
    CHECK(spectral_density(0.3, 2.0, 1.1) == spectral_density(2.0, 0.3, 1.1));
    for (double lambda : {0.1, 1.0, 3.0}) CHECK(spectral_density(0.7, 0.7, lambda) > 0.0);
    CHECK(throws_kind(ErrorKind::edge, [] { spectral_density(1.0, 1.0, 1e-8); }));
    CHECK(throws_kind(ErrorKind::edge, [] { spectral_density(1.0, 1.0, pi - 1e-8); }));
    CHECK(throws_kind(ErrorKind::domain, [] { spectral_density(1.0, 1.0, pi); }));

    // Jump of the resolvent across the cut: (2 pi i)^{-1}(R(l+i0) - R(l-i0)).
    for (double lambda : {0.4, 1.5, 2.9}) {
        for (double w : {0.0, 0.7, -2.0}) {
            const cplx ap = resolvent_kernel_log(w, SpectralPoint::boundary(lambda, Side::plus));
            const cplx am = resolvent_kernel_log(w, SpectralPoint::boundary(lambda, Side::minus));
            const cplx jump = -(ap - am) / (lambda * 2.0 * pi * I);
            CHECK(std::abs(jump - spectral_density_log(w, lambda)) < 1e-13);
        }
    }
}

TEST_CASE("sigma_n") {
    CHECK(std::abs(sigma_n(std::exp(1.0), 1) - (-1.31303528549933130)) < 1e-14);
    CHECK(std::abs(sigma_n(std::exp(1.0), 1) - (1 + std::exp(2.0)) / (1 - std::exp(2.0))) < 1e-14);
    CHECK(std::abs(sigma_n(1.0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(sigma_n(2.0, 4) - std::pow(std::log(2.0), 4)) < 1e-15);
    CHECK(sigma_n(1.0, 0) == 1.0);
}

TEST_CASE("resonance expansion") {
    const auto z = SpectralPoint::off_cut(cplx(pi + 1e-3, 0.0));
    for (auto [t, s] : {std::pair{2.0, 1.0}, std::pair{0.3, 1.7}}) {
        const cplx lead = 1.0 / (z.phi() * std::sqrt(t * s));
        CHECK(std::abs(resonance_series(t, s, z, 0) - lead) < 1e-15 * std::abs(lead));
        const cplx exact = resolvent_kernel(t, s, z);
        double prev = std::abs(exact - resonance_series(t, s, z, 0));
        for (int n = 1; n <= 4; ++n) {
            const double err = std::abs(exact - resonance_series(t, s, z, n));
            CHECK(err < 0.5 * prev);
            prev = err;
        }
    }
    CHECK(throws_kind(ErrorKind::precondition, [] {
        resonance_series(2.0, 1.0, SpectralPoint::off_cut(cplx(6.0, 1.0)), 2);
    }));
    CHECK(throws_kind(ErrorKind::domain, [&] { resonance_series(2.0, 1.0, z, 9); }));
}

TEST_CASE("zero-energy asymptote") {
    const double t = 1.1, s = 1.0;
    std::vector<double> err;
    for (double lambda : {-1e-2, -1e-3}) {
        const double exact = resolvent_kernel(t, s, SpectralPoint::off_cut(lambda)).real();
        err.push_back(std::abs(exact - zero_energy_kernel(t, s, lambda)));
    }
    const double slope = std::log10(err[0] / err[1]);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

    // Shrinking |lambda| by e^pi shifts the phase by ln(t/s); at t/s = e^pi
    // the oscillation flips sign.
    const double tt = std::exp(pi);
    const double l1 = -1e-3;
    const double l2 = l1 * std::exp(-pi);
    const double a1 = zero_energy_kernel(tt, 1.0, l1);
    const double a2 = zero_energy_kernel(tt, 1.0, l2);
    CHECK(a1 * a2 < 0.0);
    CHECK(std::abs(a2 / a1 + std::sqrt((pi * pi - l1 * l1) / (pi * pi - l2 * l2))) < 1e-9);

    CHECK(throws_kind(ErrorKind::domain, [] { zero_energy_kernel(1.0, 1.0, -1e-3); }));
    CHECK(throws_kind(ErrorKind::domain, [] { zero_energy_kernel(2.0, 1.0, 1e-3); }));
    // Near t = s the exact kernel stays finite.
    CHECK(std::isfinite(resolvent_kernel(1.0, 1.0, SpectralPoint::off_cut(-1e-3)).real()));
}
