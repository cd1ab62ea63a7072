#pragma once

// Perturbations H = C + V by symmetric integral operators, the limiting
// absorption resolvent of C, the Lippmann-Schwinger equation and the
// scattering matrix.
//
// Matrices on a LogGrid are returned in weight-symmetrized form: an integral
// operator with log-coordinate kernel K(x, y) becomes sqrt(w_i) K(x_i, x_j)
// sqrt(w_j), which acts on sqrt(w) * g. Its operator norm is the L2 norm of
// the discretized operator.

#include "carleman/mellin.hpp"

#include <Eigen/Dense>

#include <functional>

namespace carleman {

// <x> = (1 + x^2)^{1/2}
double japanese(double x);

class PerturbationKernel {
public:
    using Profile = std::function<double(double)>;
    using Kernel = std::function<double(double, double)>;

    // v(t, s) = profile(t + s)
    static PerturbationKernel hankel(Profile profile, double alpha = 2.0);
    // v(t, s) given directly; symmetry is checked at assembly.
    static PerturbationKernel general(Kernel kernel, double alpha = 2.0);
    static PerturbationKernel zero(double alpha = 2.0);

    bool is_hankel() const noexcept { return static_cast<bool>(profile_); }
    bool is_zero() const noexcept { return zero_; }
    double alpha() const noexcept { return alpha_; }

    double operator()(double t, double s) const;
    // Hankel profile v(t); domain error for general kernels.
    double profile(double t) const;
    // e^{(x+y)/2} v(e^x, e^y)
    double log_value(double x, double y) const;

    PerturbationKernel scaled(double c) const;

private:
    Profile profile_;
    Kernel kernel_;
    double alpha_ = 2.0;
    bool zero_ = false;
};

// Symmetrized matrix of V. Throws invariant for asymmetric general kernels
// and divergence for non-finite entries.
MatrixR assemble_perturbation(const PerturbationKernel& kernel, const LogGrid& grid);

// \iint |v(t,s)|^2 <ln t>^{2a} <ln s>^{2a} dt ds on the grid.
double weighted_hs_norm_sq(const PerturbationKernel& kernel, const LogGrid& grid, double alpha);

// \int_0^inf |v(t)|^2 <ln t>^{4a} t dt for a Hankel profile. Throws
// divergence when the integral does not converge.
double hankel_decay_integral(const PerturbationKernel::Profile& profile, double alpha);

// Symmetrized matrix of R_0(z) = -z^{-1}(I + A(z)).
MatrixC resolvent_matrix(const SpectralPoint& z, const LogGrid& grid);

// R_0(lambda +- i0). Throws edge when lambda is within edge_margin of 0 or pi.
MatrixC limiting_absorption_resolvent(double lambda, Side side, const LogGrid& grid,
                                      double edge_margin = default_edge_margin);

// R_0(z) g on nodal g-values by direct quadrature of the closed-form kernel.
VectorC apply_resolvent(const SpectralPoint& z, const LogGrid& grid, const VectorC& g);

// (C + V) g on nodal g-values.
VectorC apply_hamiltonian(const PerturbationKernel& kernel, const LogGrid& grid, const VectorC& g);

struct LippmannSchwingerOptions {
    // plus solves with R_0(lambda + i0) and yields psi^{(-)}; minus yields psi^{(+)}.
    Side side = Side::plus;
    double condition_cap = 1e10;
    // Largest |V psi^{(0)}| allowed in the outer 5% of the window, relative
    // to its maximum.
    double tail_tolerance = 1e-6;
    // Interior fraction of the window on which (H - lambda) psi is measured.
    double interior_fraction = 0.25;
};

struct EigenfunctionTable {
    double k = 0.0;
    LogGrid grid;
    Side side = Side::plus;
    // g-values sqrt(t) psi_j(t) at the nodes.
    VectorC psi1;
    VectorC psi2;
    // max_j ||psi_j + R_0 V psi_j - psi_j^{(0)}|| relative to ||psi_j^{(0)}||.
    double ls_residual = 0.0;
    // max_j of the <x>^{-1}-weighted norm of (H - lambda) psi_j over the interior.
    double eigen_residual = 0.0;
    // Estimated condition number of I + R_0 V.
    double condition = 1.0;
    // Relative size of V psi^{(0)} at the window ends.
    double tail = 0.0;
};

// Throws singular above the condition cap, truncation when V psi^{(0)} does
// not decay inside the window, domain for k <= 0.
EigenfunctionTable solve_lippmann_schwinger(const PerturbationKernel& kernel, double k, const LogGrid& grid,
                                            const LippmannSchwingerOptions& options = {});

// Entries named as in the quadrature formulas
//   s11 = 1 - i gamma \int t^{-1/2-ik} V psi_1,  s12 = -i gamma \int t^{-1/2+ik} V psi_1,
//   s21 = -i gamma \int t^{-1/2-ik} V psi_2,    s22 = 1 - i gamma \int t^{-1/2+ik} V psi_2,
// with gamma(k) = cosh^2(pi k) / (pi^2 sinh(pi k)).
struct ScatteringMatrix {
    double k = 0.0;
    cplx s11{1.0, 0.0};
    cplx s12{0.0, 0.0};
    cplx s21{0.0, 0.0};
    cplx s22{1.0, 0.0};
    // Spectral norm of S*S - I.
    double unitarity_defect = 0.0;

    // The operator S(k) acting on (Mf(k), Mf(-k)): column j holds the
    // coefficients produced by psi_j, so s12 sits below s11.
    Eigen::Matrix2cd matrix() const;
};

double gamma_factor(double k);

// From psi_j = psi_j^{(-)}. Throws domain for k = 0.
ScatteringMatrix scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid);
ScatteringMatrix scattering_matrix(const EigenfunctionTable& plus_side, const PerturbationKernel& kernel);

// S = I - 2 pi i Gamma_0 (V - V R(lambda + i0) V) Gamma_0^*, with the full
// resolvent formed as R_0 (I + V R_0)^{-1}.
ScatteringMatrix stationary_scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid);

// First-order truncation S = I - 2 pi i Gamma_0 V Gamma_0^*.
ScatteringMatrix born_scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid);

// Least-squares fit of sqrt(t) psi_j against e^{ik ln t} (plus) and
// e^{-ik ln t} (minus) on the outer end windows.
struct EndCoefficients {
    cplx plus{};
    cplx minus{};
};

struct AsymptoticCoefficients {
    EndCoefficients psi1_left;  // t -> 0
    EndCoefficients psi1_right; // t -> inf
    EndCoefficients psi2_left;
    EndCoefficients psi2_right;
    // Largest relative rms residual of the four fits.
    double fit_residual = 0.0;
};

// Throws grid_too_small when a fit residual exceeds tolerance.
AsymptoticCoefficients extract_asymptotics(const EigenfunctionTable& table, double window_fraction = 0.15,
                                           double tolerance = 1e-4);

} // namespace carleman
