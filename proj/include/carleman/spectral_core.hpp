#pragma once

// Dispersion relation, branch of the quasi-momentum function, the function
// rho(u; z) and the closed-form resolvent kernel of the Carleman operator
// (Cf)(t) = \int_0^\infty (t+s)^{-1} f(s) ds.
//
// Conventions used throughout the library:
//   * lambda(k) = pi / cosh(pi k) maps k >= 0 onto (0, pi].
//   * phi(z) = sqrt(z^2 - pi^2) with the cut [-pi, pi] and phi(z) > 0 for z > pi.
//   * q(z) = (pi - i phi(z)) / z, arg q in (0, 2 pi), bold_k(z) = ln q(z) / pi.
//   * theta(z) = 2 + i bold_k(z); Re theta lies in [0, 2].
//   * R(z) = -z^{-1} (I + A(z)), A(z) has kernel phi(z)^{-1} (ts)^{-1/2} rho(t/s; z).
//
// In the logarithmic variable x = ln t the kernel of A(z) becomes the
// convolution kernel phi(z)^{-1} rho(e^{x-y}; z); the *_log functions return
// that form and are what the grid discretizations use.

#include <complex>
#include <numbers>

namespace carleman {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Boundary evaluation requires lambda in [edge_margin, pi - edge_margin]
// unless an edge-asymptotic operation is used.
inline constexpr double default_edge_margin = 1e-6;

enum class Side { off_cut, plus, minus };

// A complex energy off the cut [0, pi], or a boundary value lambda +- i0.
class SpectralPoint {
public:
    // z must not lie in [0, pi].
    static SpectralPoint off_cut(cplx z);
    // lambda in [-pi, pi] \ {0}; side is Side::plus or Side::minus.
    static SpectralPoint boundary(double lambda, Side side);

    cplx value() const noexcept { return z_; }
    Side location() const noexcept { return side_; }
    bool is_boundary() const noexcept { return side_ != Side::off_cut; }

    // Real points of [-pi, 0) reached without a side flag: the resolvent is
    // analytic there but phi, q and bold_k are not single valued.
    bool has_branch() const noexcept { return has_branch_; }

    cplx phi() const;
    cplx q() const;
    cplx bold_k() const;
    cplx theta() const;

private:
    SpectralPoint() = default;
    void require_branch() const;

    cplx z_{};
    Side side_ = Side::off_cut;
    bool has_branch_ = false;
    cplx phi_{};
    cplx q_{};
    cplx k_{};
    cplx theta_{};
};

// Quasi-momentum / energy pair tied by the dispersion relation.
struct QuasiMomentum {
    double k = 0.0;
    double lambda = pi;

    static QuasiMomentum from_k(double k);
    static QuasiMomentum from_lambda(double lambda);
};

double lambda_of_k(double k);
double k_of_lambda(double lambda);

cplx branch_k(const SpectralPoint& z);

// rho(u; z) of the resolvent formula. Even under u -> 1/u.
cplx rho(double u, const SpectralPoint& z);
// rho(e^w; z), the form used on logarithmic grids.
cplx rho_log(double w, const SpectralPoint& z);
// rho(e^w; lambda) - 1 for real lambda >= pi, evaluated without cancellation.
double rho_tilde_log(double w, double theta);

// Kernel a(t, s; z) of A(z); the full resolvent kernel is
// -z^{-1} (delta(t - s) + a(t, s; z)).
cplx resolvent_kernel(double t, double s, const SpectralPoint& z);
// e^{(x+y)/2} a(e^x, e^y; z) as a function of w = x - y.
cplx resolvent_kernel_log(double w, const SpectralPoint& z);

// Density d e(t, s; lambda)/d lambda of the spectral family, 0 < lambda < pi.
double spectral_density(double t, double s, double lambda);
double spectral_density_log(double w, double lambda);

// sigma_n(u): ln^n u for even n, (1+u^2)/(1-u^2) ln^n u for odd n.
double sigma_n(double u, int n);

// Partial sum (orders 0..order) of the expansion of a(t, s; z) at z = pi.
cplx resonance_series(double t, double s, const SpectralPoint& z, int order);

// Small-|lambda| asymptote of a(t, s; lambda) for lambda < 0, t != s.
double zero_energy_kernel(double t, double s, double lambda);

} // namespace carleman
