#include "carleman/discrete_spectrum.hpp"

#include "carleman/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace carleman {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
// Fraction of the window at each end checked for eigenvector or tail mass.
constexpr double end_fraction = 0.05;

struct SymmetricEigen {
    VectorR values;  // ascending
    MatrixR vectors; // columns, only when requested
};

// LAPACK dsyevr on a copy of a. With lower = -inf all eigenpairs are
// returned, otherwise those above lower.
SymmetricEigen symmetric_eigen(MatrixR a, bool vectors, double lower = -inf) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    SymmetricEigen out;
    if (n == 0) return out;
    VectorR w(n);
    MatrixR z(vectors ? n : 1, vectors ? n : 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    char range = 'A';
    double vl = 0.0;
    double vu = 0.0;
    if (lower > -inf) {
        range = 'V';
        vl = lower;
        // Every eigenvalue is bounded by the Frobenius norm.
        vu = std::max(std::abs(lower), a.norm()) + 1.0;
    }
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', range, 'L', n, a.data(), n, vl, vu, 0, 0, 0.0,
                       &found, w.data(), z.data(), vectors ? n : 1, support.data());
    require(info == 0, ErrorKind::invariant, "symmetric eigensolver failed (dsyevr info " + std::to_string(info) + ")");
    out.values = w.head(found);
    if (vectors) out.vectors = z.leftCols(found);
    return out;
}

// \iint <x>^{-2a} K(x - y) <y>^{-2a} dx dy for a kernel growing at most like
// |w|^2. Nested trapezoid after x = sinh((pi/2) sinh xi), which turns the
// algebraic tails into double-exponentially decaying ones; the step is halved
// until two levels agree.
QuadratureValue weighted_convolution_integral(const std::function<double(double)>& kernel, double alpha) {
    require(alpha > 1.5, ErrorKind::divergence, "weighted integral diverges for alpha <= 3/2");
    const double c = pi / 2.0;
    // The tail beyond |x| = X is of order X^{3 - 2 alpha}; stop where it drops
    // below 1e-16, capped to stay inside double range.
    const double log_x_max = std::min(16.0 * std::log(10.0) / (2.0 * alpha - 3.0), 300.0);
    const double xi_max = std::asinh(log_x_max / c);

    auto level = [&](double h) {
        const int m = static_cast<int>(std::ceil(xi_max / h));
        std::vector<double> x;
        std::vector<double> wt;
        for (int i = -m; i <= m; ++i) {
            const double xi = i * h;
            const double s = c * std::sinh(xi);
            const double xv = std::sinh(s);
            // log of <x>^{-2a} dx/dxi
            const double log_w = -2.0 * alpha * std::log(std::hypot(1.0, xv)) + std::log(std::cosh(s)) +
                                 std::log(c * std::cosh(xi));
            const double wv = std::exp(log_w) * h;
            if (wv == 0.0) continue;
            x.push_back(xv);
            wt.push_back(wv);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) row += wt[j] * kernel(x[i] - x[j]);
            sum += wt[i] * row;
        }
        return sum;
    };

    double h = 0.25;
    double previous = level(h);
    QuadratureValue out;
    for (int iter = 0; iter < 5; ++iter) {
        h *= 0.5;
        const double current = level(h);
        out.value = current;
        out.error = std::abs(current - previous);
        if (out.error <= 1e-12 * std::abs(current)) break;
        previous = current;
    }
    require(std::isfinite(out.value), ErrorKind::divergence, "weighted integral did not converge");
    return out;
}

// w coth w, smooth through 0.
double w_coth_w(double w) {
    if (std::abs(w) < 1e-4) return 1.0 + w * w / 3.0;
    return w / std::tanh(w);
}

double phi_above(double lambda) { return std::sqrt((lambda - pi) * (lambda + pi)); }

void require_above(double lambda) {
    require(std::isfinite(lambda) && lambda > pi, ErrorKind::domain, "energy must lie above pi");
}

} // namespace

MatrixR psd_sqrt(const MatrixR& v, double relative_tolerance) {
    const SymmetricEigen e = symmetric_eigen(v, true);
    if (e.values.size() == 0) return v;
    const double scale = e.values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return MatrixR::Zero(v.rows(), v.cols());
    require(e.values.minCoeff() >= -relative_tolerance * scale, ErrorKind::theory_inapplicable,
            "V is indefinite beyond round-off; Birman-Schwinger counting requires V >= 0");
    const VectorR root = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * root.asDiagonal() * e.vectors.transpose();
}

MatrixR positive_part(const MatrixR& v) {
    const SymmetricEigen e = symmetric_eigen(v, true);
    if (e.values.size() == 0) return v;
    return e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.transpose();
}

double theta_above(double lambda) {
    require_above(lambda);
    return std::atan(phi_above(lambda) / pi) / pi;
}

MatrixR birman_schwinger_matrix(const PerturbationKernel& kernel, double lambda, const LogGrid& grid) {
    require_above(lambda);
    const std::size_t n = grid.size();
    const MatrixR v = assemble_perturbation(kernel, grid);
    if (kernel.is_zero()) return MatrixR::Zero(n, n);
    const MatrixR root = psd_sqrt(v);
    const double phi = phi_above(lambda);
    const double theta = theta_above(lambda);

    std::vector<double> table(n);
    for (std::size_t d = 0; d < n; ++d) table[d] = rho_tilde_log(static_cast<double>(d) * grid.step(), theta) / phi;
    const VectorR sw = grid.weights().cwiseSqrt();
    MatrixR a_tilde(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) a_tilde(i, j) = sw[i] * sw[j] * table[i > j ? i - j : j - i];

    // w = V^{1/2} psi_0, psi_0 = 1 in g-values.
    const VectorR w = root * sw;
    MatrixR b = (v + root * a_tilde * root) / lambda;
    b += (w * w.transpose()) / (lambda * phi);
    return 0.5 * (b + b.transpose());
}

int birman_schwinger_count(const PerturbationKernel& kernel, double lambda, const LogGrid& grid) {
    require_above(lambda);
    if (kernel.is_zero()) return 0;
    return static_cast<int>(symmetric_eigen(birman_schwinger_matrix(kernel, lambda, grid), false, 1.0).values.size());
}

QuadratureValue gamma_alpha(double alpha) {
    require(std::isfinite(alpha) && alpha > 1.5, ErrorKind::divergence, "gamma_alpha diverges for alpha <= 3/2");
    const double pi4 = pi * pi * pi * pi;
    const QuadratureValue sq = weighted_convolution_integral(
        [](double w) {
            const double s = w_coth_w(w);
            return s * s;
        },
        alpha);
    // gamma^2 = pi^{-4} \iint ...
    const double value = std::sqrt(sq.value / pi4);
    return {value, 0.5 * sq.error / pi4 / std::max(value, 1e-300)};
}

QuadratureValue a_tilde_distance(double lambda, double alpha) {
    require_above(lambda);
    const double phi = phi_above(lambda);
    const double theta = theta_above(lambda);
    const QuadratureValue sq = weighted_convolution_integral(
        [&](double w) {
            const double d = rho_tilde_log(w, theta) / phi + w_coth_w(w) / (pi * pi);
            return d * d;
        },
        alpha);
    const double value = std::sqrt(sq.value);
    return {value, 0.5 * sq.error / std::max(value, 1e-300)};
}

double eigenvalue_bound(const PerturbationKernel& kernel, double alpha, const LogGrid& grid) {
    if (kernel.is_zero()) return 1.0;
    const MatrixR v = positive_part(assemble_perturbation(kernel, grid));
    const std::size_t n = grid.size();
    VectorR q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = std::pow(japanese(grid.x(i)), alpha);
    const MatrixR weighted = q.asDiagonal() * v * q.asDiagonal();
    const double peak = weighted.cwiseAbs().maxCoeff();
    const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(end_fraction * n));
    double tail = 0.0;
    for (std::size_t i = 0; i < edge; ++i) {
        tail = std::max(tail, weighted.row(i).cwiseAbs().maxCoeff());
        tail = std::max(tail, weighted.row(n - 1 - i).cwiseAbs().maxCoeff());
    }
    require(peak == 0.0 || tail <= 1e-8 * peak, ErrorKind::divergence,
            "Q^alpha V Q^alpha does not decay at the window ends; the weighted condition fails");
    const double hs = v.norm();
    const double op = symmetric_eigen(weighted, false).values.cwiseAbs().maxCoeff();
    const double g = gamma_alpha(alpha).value;
    const double s = hs + g * op;
    return s * s / (pi * pi) + 1.0;
}

double resonance_weight(const PerturbationKernel& kernel) {
    if (kernel.is_zero()) return 0.0;
    if (!kernel.is_hankel()) return resonance_weight_double(kernel);
    auto v = [&](double t) { return kernel.profile(t); };
    double err_near = 0.0;
    double err_far = 0.0;
    double near = 0.0;
    double far = 0.0;
    try {
        near = boost::math::quadrature::tanh_sinh<double>().integrate(v, 0.0, 1.0, 1e-14, &err_near);
        far = boost::math::quadrature::exp_sinh<double>().integrate(v, 1.0, inf, 1e-14, &err_far);
    } catch (const std::exception&) {
        fail(ErrorKind::divergence, "\\int v(t) dt diverges");
    }
    const double total = near + far;
    require(std::isfinite(total) && err_near + err_far <= 1e-10 * std::max(std::abs(total), 1e-300),
            ErrorKind::divergence, "\\int v(t) dt diverges");
    return pi * total;
}

double resonance_weight_double(const PerturbationKernel& kernel) {
    if (kernel.is_zero()) return 0.0;
    // In log coordinates (ts)^{-1/2} dt ds = e^{(x+y)/2} dx dy, so the
    // integrand is exactly log_value(x, y).
    boost::math::quadrature::sinh_sinh<double> quad;
    double total = 0.0;
    double error = 0.0;
    try {
        total = quad.integrate(
            [&](double x) {
                // Beyond t = e^700 the argument overflows; the region carries no mass
                // for any kernel whose double integral converges.
                if (x > 700.0) return 0.0;
                return quad.integrate([&](double y) { return y > 700.0 ? 0.0 : kernel.log_value(x, y); }, 1e-14);
            },
            1e-13, &error);
    } catch (const std::exception&) {
        fail(ErrorKind::divergence, "(V psi_0, psi_0) diverges");
    }
    require(std::isfinite(total) && error <= 1e-9 * std::max(std::abs(total), 1e-300), ErrorKind::divergence,
            "(V psi_0, psi_0) diverges");
    return total;
}

DirectCount count_direct(const PerturbationKernel& kernel, double threshold, const LogGrid& grid,
                         double boundary_tolerance) {
    require(std::isfinite(threshold), ErrorKind::domain, "threshold must be finite");
    const std::size_t n = grid.size();
    MatrixR h = carleman_matrix(grid);
    if (!kernel.is_zero()) h += assemble_perturbation(kernel, grid);
    const SymmetricEigen e = symmetric_eigen(h, true, threshold);
    DirectCount out;
    out.count = static_cast<int>(e.values.size());
    const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(end_fraction * n));
    for (Eigen::Index c = e.values.size() - 1; c >= 0; --c) {
        out.eigenvalues.push_back(e.values[c]);
        const auto col = e.vectors.col(c);
        const double mass = col.head(edge).squaredNorm() + col.tail(edge).squaredNorm();
        out.boundary_mass = std::max(out.boundary_mass, mass / col.squaredNorm());
    }
    require(out.boundary_mass <= boundary_tolerance, ErrorKind::grid_too_small,
            "an eigenvector above the threshold reaches the window ends; widen the grid");
    return out;
}

int certified_count_direct(const PerturbationKernel& kernel, double threshold, const LogGrid& grid) {
    const int base = count_direct(kernel, threshold, grid).count;
    const int fine = count_direct(kernel, threshold, LogGrid(grid.x_min(), grid.x_max(), 2 * grid.size())).count;
    const double center = 0.5 * (grid.x_min() + grid.x_max());
    const double half = 0.75 * (grid.x_max() - grid.x_min());
    const std::size_t n_wide = static_cast<std::size_t>(std::lround(1.5 * static_cast<double>(grid.size() - 1))) + 1;
    const int wide = count_direct(kernel, threshold, LogGrid(center - half, center + half, n_wide)).count;
    require(base == fine && base == wide, ErrorKind::grid_too_small,
            "eigenvalue count changes under refinement or widening; the grid is not converged");
    return base;
}

LogGrid default_count_grid() { return LogGrid(-160.0, 160.0, 1024); }

BirmanSchwingerReport birman_schwinger_report(const PerturbationKernel& kernel, double lambda,
                                              const LogGrid& grid, double alpha) {
    BirmanSchwingerReport r;
    r.lambda = lambda;
    r.count_bs = birman_schwinger_count(kernel, lambda, grid);
    r.count_direct = count_direct(kernel, lambda, grid).count;
    r.bound_N = eigenvalue_bound(kernel, alpha, grid);
    r.w_norm_sq = resonance_weight(kernel);
    return r;
}

} // namespace carleman
