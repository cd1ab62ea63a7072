#pragma once

// Eigenvalues of H = C + V above the continuous spectrum [0, pi].
//
// For lambda > pi write phi = sqrt(lambda^2 - pi^2) and
// theta(lambda) = pi^{-1} arctan(phi / pi). Then (lambda - C)^{-1} = lambda^{-1}(I + A(lambda))
// and A(lambda) = phi^{-1} <., psi_0> psi_0 + A~(lambda) with psi_0(t) = t^{-1/2}; the
// first term carries the (lambda^2 - pi^2)^{-1/2} singularity at the edge and is
// added to the Birman-Schwinger operator in closed form.

#include "carleman/scattering.hpp"

namespace carleman {

// Symmetric square root of a positive semidefinite matrix. Eigenvalues in
// [-tol, 0) with tol = relative_tolerance * ||v|| are clipped; anything more
// negative throws theory_inapplicable.
MatrixR psd_sqrt(const MatrixR& v, double relative_tolerance = 1e-10);

// (V + |V|) / 2
MatrixR positive_part(const MatrixR& v);

double theta_above(double lambda);

// Symmetrized B(lambda) = V^{1/2} (lambda - C)^{-1} V^{1/2}, lambda > pi.
MatrixR birman_schwinger_matrix(const PerturbationKernel& kernel, double lambda, const LogGrid& grid);

// Number of eigenvalues of B(lambda) above 1.
int birman_schwinger_count(const PerturbationKernel& kernel, double lambda, const LogGrid& grid);

struct QuadratureValue {
    double value = 0.0;
    double error = 0.0;
};

// gamma_alpha = ||Q^{-alpha} A~ Q^{-alpha}||_2 with the edge kernel
// pi^{-2} (ts)^{-1/2} sigma_1(t/s). Throws divergence for alpha <= 3/2.
QuadratureValue gamma_alpha(double alpha);

// ||Q^{-alpha} (A~(lambda) - A~) Q^{-alpha}||_2 for lambda > pi.
QuadratureValue a_tilde_distance(double lambda, double alpha);

// pi^{-2} (||V||_2 + gamma_alpha ||Q^alpha V Q^alpha||)^2 + 1, with V replaced by
// its positive part. Throws divergence when the weighted matrix does not
// decay at the window ends.
double eigenvalue_bound(const PerturbationKernel& kernel, double alpha, const LogGrid& grid);

// ||w||^2 = (V psi_0, psi_0). Hankel kernels use pi \int v(t) dt, general
// kernels the double integral.
double resonance_weight(const PerturbationKernel& kernel);
double resonance_weight_double(const PerturbationKernel& kernel);

struct DirectCount {
    int count = 0;
    // Eigenvalues above the threshold, descending.
    std::vector<double> eigenvalues;
    // Largest end-window mass fraction among their eigenvectors.
    double boundary_mass = 0.0;
};

// Eigenvalues of the discretized C + V above threshold. Throws grid_too_small
// when an eigenvector reaches the window ends.
DirectCount count_direct(const PerturbationKernel& kernel, double threshold, const LogGrid& grid,
                         double boundary_tolerance = 1e-6);

// count_direct on grid, on the same window with twice the points, and on a
// window 1.5 times wider at the same step. Throws grid_too_small unless all
// three agree.
int certified_count_direct(const PerturbationKernel& kernel, double threshold, const LogGrid& grid);

// Window used for counting: eigenvectors just above pi decay slowly.
LogGrid default_count_grid();

struct BirmanSchwingerReport {
    double lambda = 0.0;
    int count_bs = 0;
    int count_direct = 0;
    double bound_N = 1.0;
    double w_norm_sq = 0.0;
};

BirmanSchwingerReport birman_schwinger_report(const PerturbationKernel& kernel, double lambda,
                                              const LogGrid& grid, double alpha = 2.0);

} // namespace carleman
