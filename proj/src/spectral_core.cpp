#include "carleman/spectral_core.hpp"

#include "carleman/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace carleman {

namespace {

constexpr cplx I{0.0, 1.0};

// Below this |ln u| rho is evaluated from its Taylor expansion: both terms of
// the defining sum blow up at u = 1 while the sum stays smooth.
constexpr double series_switch = 1e-3;

void require_positive(double v, const char* name) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::domain,
            std::string(name) + " must be positive and finite");
}

// w coth w, smooth through w = 0.
double w_coth_w(double w) {
    if (std::abs(w) < 1e-4) {
        const double w2 = w * w;
        return 1.0 + w2 / 3.0 - w2 * w2 / 45.0;
    }
    return w / std::tanh(w);
}

// rho(e^w) written through theta: for w >= 0
//   rho = (e^{-theta w} - e^{(theta-2) w}) / (1 - e^{-2w}).
cplx rho_from_theta(double w, cplx theta) {
    w = std::abs(w);
    if (w < series_switch) {
        // Quotient of the Taylor series of numerator and denominator.
        const cplx a = -theta;
        const cplx b = theta - 2.0;
        std::array<cplx, 5> num{};
        std::array<double, 5> den{};
        cplx ap = a;
        cplx bp = b;
        double fact = 1.0;
        double m2 = -2.0;
        for (int m = 0; m < 5; ++m) {
            fact *= (m + 1);
            num[m] = (ap - bp) / fact;
            den[m] = -m2 / fact;
            ap *= a;
            bp *= b;
            m2 *= -2.0;
        }
        std::array<cplx, 5> c{};
        for (int m = 0; m < 5; ++m) {
            cplx acc = num[m];
            for (int j = 1; j <= m; ++j) acc -= den[j] * c[m - j];
            c[m] = acc / den[0];
        }
        cplx sum = c[4];
        for (int m = 3; m >= 0; --m) sum = sum * w + c[m];
        return sum;
    }
    const double denom = -std::expm1(-2.0 * w);
    return (std::exp(-theta * w) - std::exp((theta - 2.0) * w)) / denom;
}

} // namespace

// --- SpectralPoint -----------------------------------------------------------

SpectralPoint SpectralPoint::off_cut(cplx z) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::domain,
            "spectral point must be finite");
    SpectralPoint p;
    if (z.imag() == 0.0) {
        z = cplx(z.real(), 0.0);
        require(!(z.real() >= 0.0 && z.real() <= pi), ErrorKind::domain,
                "off-cut point lies on the spectrum [0, pi]");
    }
    p.z_ = z;
    p.side_ = Side::off_cut;
    if (z.imag() == 0.0 && z.real() >= -pi && z.real() < 0.0) {
        // On the cut of phi; the resolvent is analytic here but the branch
        // quantities need a side.
        p.has_branch_ = false;
        return p;
    }
    p.has_branch_ = true;
    p.phi_ = std::sqrt(z - pi) * std::sqrt(z + pi);
    p.q_ = (pi - I * p.phi_) / z;
    const double arg = std::arg(p.q_);
    const double log_abs = std::log(std::abs(p.q_));
    // arg q is taken in (0, 2 pi); theta = 2 + i k is formed without
    // subtracting nearly equal numbers.
    double full_arg = arg;
    cplx theta;
    if (arg <= 0.0) {
        full_arg = arg + 2.0 * pi;
        theta = cplx(-arg / pi, log_abs / pi);
    } else {
        theta = cplx(2.0 - arg / pi, log_abs / pi);
    }
    p.k_ = cplx(log_abs, full_arg) / pi;
    p.theta_ = theta;
    return p;
}

SpectralPoint SpectralPoint::boundary(double lambda, Side side) {
    require(side == Side::plus || side == Side::minus, ErrorKind::domain,
            "boundary point needs side plus or minus");
    require(std::isfinite(lambda) && lambda >= -pi && lambda <= pi && lambda != 0.0,
            ErrorKind::domain, "boundary value requires lambda in [-pi, pi] \\ {0}");
    SpectralPoint p;
    p.z_ = cplx(lambda, 0.0);
    p.side_ = side;
    p.has_branch_ = true;
    const double a = std::abs(lambda);
    const double k = k_of_lambda(a);
    const double root = std::sqrt((pi - a) * (pi + a));
    const double sign = side == Side::plus ? 1.0 : -1.0;
    p.phi_ = cplx(0.0, sign * root);
    if (lambda > 0.0) {
        // bold_k(lambda + i0) = k + 2i; the minus side is -conj of it.
        p.k_ = cplx(sign * k, 2.0);
        p.theta_ = cplx(0.0, sign * k);
        p.q_ = cplx(std::exp(sign * pi * k), 0.0);
    } else {
        p.k_ = cplx(sign * k, 1.0);
        p.theta_ = cplx(1.0, sign * k);
        p.q_ = cplx(-std::exp(sign * pi * k), 0.0);
    }
    return p;
}

void SpectralPoint::require_branch() const {
    require(has_branch_, ErrorKind::ambiguity,
            "point on the cut [-pi, 0) needs a side flag (lambda +- i0)");
}

cplx SpectralPoint::phi() const { require_branch(); return phi_; }
cplx SpectralPoint::q() const { require_branch(); return q_; }
cplx SpectralPoint::bold_k() const { require_branch(); return k_; }
cplx SpectralPoint::theta() const { require_branch(); return theta_; }

// --- dispersion --------------------------------------------------------------

double lambda_of_k(double k) {
    require(std::isfinite(k) && k >= 0.0, ErrorKind::domain,
            "quasi-momentum must be finite and nonnegative");
    return pi / std::cosh(pi * k);
}

double k_of_lambda(double lambda) {
    require(std::isfinite(lambda) && lambda > 0.0 && lambda <= pi, ErrorKind::domain,
            "energy must lie in (0, pi]");
    const double root = std::sqrt((pi - lambda) * (pi + lambda));
    return std::log1p((pi - lambda + root) / lambda) / pi;
}

QuasiMomentum QuasiMomentum::from_k(double k) { return {k, lambda_of_k(k)}; }
QuasiMomentum QuasiMomentum::from_lambda(double lambda) { return {k_of_lambda(lambda), lambda}; }

cplx branch_k(const SpectralPoint& z) {
    if (!z.has_branch() && z.value().real() == -pi) {
        // Both sides of the cut agree at its left end.
        return I;
    }
    return z.bold_k();
}

// --- rho and the resolvent kernel --------------------------------------------

cplx rho_log(double w, const SpectralPoint& z) {
    require(std::isfinite(w), ErrorKind::domain, "ln u must be finite");
    return rho_from_theta(w, z.theta());
}

cplx rho(double u, const SpectralPoint& z) {
    require_positive(u, "u");
    return rho_log(std::log(u), z);
}

double rho_tilde_log(double w, double theta) {
    w = std::abs(w);
    if (w < series_switch) return rho_from_theta(w, cplx(theta, 0.0)).real() - 1.0;
    const double denom = -std::expm1(-2.0 * w);
    const double tw = theta * w;
    const double lead = tw < 1.0 ? std::exp(-2.0 * w) * std::expm1(tw)
                                 : std::exp((theta - 2.0) * w) - std::exp(-2.0 * w);
    return (std::expm1(-tw) - lead) / denom;
}

cplx resolvent_kernel_log(double w, const SpectralPoint& z) {
    require(std::isfinite(w), ErrorKind::domain, "ln(t/s) must be finite");
    const cplx zv = z.value();
    const bool real_negative = zv.imag() == 0.0 && zv.real() < 0.0 && zv.real() >= -pi;
    if (real_negative) {
        // a(t, s; lambda) is real and side independent on [-pi, 0).
        const double lambda = zv.real();
        const double aw = std::abs(w);
        const double sinhc = aw < 1e-8 ? 1.0 : std::sinh(w) / w;
        if (lambda == -pi) return -1.0 / (pi * pi * sinhc);
        const double a = -lambda;
        const double k = k_of_lambda(a);
        const double root = std::sqrt((pi - a) * (pi + a));
        const double kw = k * w;
        const double sinc = std::abs(kw) < 1e-8 ? 1.0 : std::sin(kw) / kw;
        return -(k / root) * sinc / sinhc;
    }
    return rho_log(w, z) / z.phi();
}

cplx resolvent_kernel(double t, double s, const SpectralPoint& z) {
    require_positive(t, "t");
    require_positive(s, "s");
    return resolvent_kernel_log(std::log(t / s), z) / std::sqrt(t * s);
}

// --- spectral density --------------------------------------------------------

double spectral_density_log(double w, double lambda) {
    require(std::isfinite(lambda) && lambda > 0.0 && lambda < pi, ErrorKind::domain,
            "spectral density needs lambda in (0, pi)");
    require(lambda >= default_edge_margin && lambda <= pi - default_edge_margin,
            ErrorKind::edge, "spectral density is singular at the edges 0 and pi");
    const double k = k_of_lambda(lambda);
    const double root = std::sqrt((pi - lambda) * (pi + lambda));
    return std::cos(k * w) / (pi * lambda * root);
}

double spectral_density(double t, double s, double lambda) {
    require_positive(t, "t");
    require_positive(s, "s");
    return spectral_density_log(std::log(t / s), lambda) / std::sqrt(t * s);
}

// --- edge expansions ---------------------------------------------------------

double sigma_n(double u, int n) {
    require_positive(u, "u");
    require(n >= 0, ErrorKind::domain, "order must be nonnegative");
    const double w = std::log(u);
    if (n % 2 == 0) return std::pow(w, n);
    // (1+u^2)/(1-u^2) = -coth(ln u)
    return -w_coth_w(w) * std::pow(w, n - 1);
}

cplx resonance_series(double t, double s, const SpectralPoint& z, int order) {
    require_positive(t, "t");
    require_positive(s, "s");
    require(order >= 0 && order <= 8, ErrorKind::domain, "series order must be in [0, 8]");
    const cplx theta = z.theta();
    require(std::abs(z.value() - pi) < 1.0 && std::abs(theta) < 1.0, ErrorKind::precondition,
            "resonance expansion needs z close to pi (|z - pi| < 1)");
    const double u = t / s;
    cplx sum = 0.0;
    cplx power = 1.0;
    double fact = 1.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) {
            power *= theta;
            fact *= n;
        }
        sum += power / fact * sigma_n(u, n);
    }
    return sum / (z.phi() * std::sqrt(t * s));
}

double zero_energy_kernel(double t, double s, double lambda) {
    require_positive(t, "t");
    require_positive(s, "s");
    require(t != s, ErrorKind::domain, "zero-energy asymptote is stated for t != s");
    require(std::isfinite(lambda) && lambda < 0.0 && lambda > -pi, ErrorKind::domain,
            "zero-energy asymptote needs lambda in (-pi, 0)");
    const double root = std::sqrt((pi + lambda) * (pi - lambda));
    const double phase = std::log(-lambda / (2.0 * pi)) / pi * std::log(t / s);
    return 2.0 / root * std::sqrt(t * s) / (t * t - s * s) * std::sin(phase);
}

} // namespace carleman
