#include "carleman/scattering.hpp"

#include "carleman/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace carleman {

namespace {

constexpr cplx I{0.0, 1.0};

// Relative asymmetry tolerated in a general kernel.
constexpr double symmetry_tolerance = 1e-12;
// Width of the end windows used for the tail diagnostic.
constexpr double tail_window = 0.05;

std::vector<cplx> kernel_table(const SpectralPoint& z, const LogGrid& grid) {
    std::vector<cplx> table(grid.size());
    for (std::size_t d = 0; d < grid.size(); ++d)
        table[d] = resolvent_kernel_log(static_cast<double>(d) * grid.step(), z);
    return table;
}

// A * B for complex A and real B as two real products.
MatrixC times_real(const MatrixC& a, const MatrixR& b) {
    const MatrixR re = a.real() * b;
    const MatrixR im = a.imag() * b;
    MatrixC out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

MatrixC real_times(const MatrixR& a, const MatrixC& b) {
    const MatrixR re = a * b.real();
    const MatrixR im = a * b.imag();
    MatrixC out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

// Columns sqrt(w) e^{ikx} and sqrt(w) e^{-ikx}.
MatrixC free_modes(const LogGrid& grid, double k) {
    MatrixC e(grid.size(), 2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double sw = std::sqrt(grid.weight(i));
        e(i, 0) = sw * std::polar(1.0, k * grid.x(i));
        e(i, 1) = sw * std::polar(1.0, -k * grid.x(i));
    }
    return e;
}

void require_momentum(double k) {
    require(std::isfinite(k) && k > 0.0, ErrorKind::domain,
            "quasi-momentum must be positive (gamma(k) is singular at k = 0)");
}

// Builds S from T e_+- where T is V (Born), V - V R V, or V psi_j.
// Column c of te holds the symmetrized T applied to free mode c.
ScatteringMatrix assemble_matrix(double k, const LogGrid& grid, const MatrixC& te) {
    const double g = gamma_factor(k);
    const MatrixC e = free_modes(grid, k);
    // f_plus(v) = \int e^{-ikx} v, f_minus(v) = \int e^{ikx} v; the symmetrized
    // vectors already carry one sqrt(w).
    auto f_plus = [&](Eigen::Index c) { return e.col(1).cwiseProduct(te.col(c)).sum(); };
    auto f_minus = [&](Eigen::Index c) { return e.col(0).cwiseProduct(te.col(c)).sum(); };
    ScatteringMatrix s;
    s.k = k;
    s.s11 = 1.0 - I * g * f_plus(0);
    s.s12 = -I * g * f_minus(0);
    s.s21 = -I * g * f_plus(1);
    s.s22 = 1.0 - I * g * f_minus(1);
    const Eigen::Matrix2cd m = s.matrix();
    const Eigen::Matrix2cd defect = m.adjoint() * m - Eigen::Matrix2cd::Identity();
    s.unitarity_defect = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(defect, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .cwiseAbs()
                             .maxCoeff();
    return s;
}

} // namespace

double japanese(double x) { return std::sqrt(1.0 + x * x); }

// --- kernels -----------------------------------------------------------------

PerturbationKernel PerturbationKernel::hankel(Profile profile, double alpha) {
    require(static_cast<bool>(profile), ErrorKind::domain, "Hankel profile is empty");
    PerturbationKernel k;
    k.profile_ = std::move(profile);
    k.alpha_ = alpha;
    return k;
}

PerturbationKernel PerturbationKernel::general(Kernel kernel, double alpha) {
    require(static_cast<bool>(kernel), ErrorKind::domain, "kernel function is empty");
    PerturbationKernel k;
    k.kernel_ = std::move(kernel);
    k.alpha_ = alpha;
    return k;
}

PerturbationKernel PerturbationKernel::zero(double alpha) {
    PerturbationKernel k = hankel([](double) { return 0.0; }, alpha);
    k.zero_ = true;
    return k;
}

double PerturbationKernel::operator()(double t, double s) const {
    return profile_ ? profile_(t + s) : kernel_(t, s);
}

double PerturbationKernel::profile(double t) const {
    require(is_hankel(), ErrorKind::domain, "kernel has no Hankel profile");
    return profile_(t);
}

double PerturbationKernel::log_value(double x, double y) const {
    if (zero_) return 0.0;
    const double v = (*this)(std::exp(x), std::exp(y));
    return v == 0.0 ? 0.0 : std::exp(0.5 * (x + y)) * v;
}

PerturbationKernel PerturbationKernel::scaled(double c) const {
    PerturbationKernel k = *this;
    if (profile_) {
        k.profile_ = [p = profile_, c](double t) { return c * p(t); };
    } else {
        k.kernel_ = [f = kernel_, c](double t, double s) { return c * f(t, s); };
    }
    k.zero_ = zero_ || c == 0.0;
    return k;
}

MatrixR assemble_perturbation(const PerturbationKernel& kernel, const LogGrid& grid) {
    const std::size_t n = grid.size();
    MatrixR out = MatrixR::Zero(n, n);
    if (kernel.is_zero()) return out;
    const VectorR sw = grid.weights().cwiseSqrt();
    double largest = 0.0;
    double asymmetry = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = kernel.is_hankel() ? j : 0; i < n; ++i) {
            const double v = kernel.log_value(grid.x(i), grid.x(j));
            require(std::isfinite(v), ErrorKind::divergence, "perturbation kernel is not finite on the grid");
            out(i, j) = sw[i] * sw[j] * v;
            largest = std::max(largest, std::abs(v));
        }
    }
    if (kernel.is_hankel()) {
        out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
        return out;
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) asymmetry = std::max(asymmetry, std::abs(out(i, j) - out(j, i)));
    require(asymmetry <= symmetry_tolerance * std::max(largest, 1e-300) * grid.step(), ErrorKind::invariant,
            "perturbation kernel is not symmetric: v(t,s) != v(s,t)");
    return 0.5 * (out + out.transpose());
}

double weighted_hs_norm_sq(const PerturbationKernel& kernel, const LogGrid& grid, double alpha) {
    const MatrixR v = assemble_perturbation(kernel, grid);
    VectorR q(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) q[i] = std::pow(japanese(grid.x(i)), 2.0 * alpha);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        for (Eigen::Index i = 0; i < v.rows(); ++i) sum += v(i, j) * v(i, j) * q[i] * q[j];
    return sum;
}

double hankel_decay_integral(const PerturbationKernel::Profile& profile, double alpha) {
    // In x = ln t: \int v(e^x)^2 <x>^{4a} e^{2x} dx over the line.
    auto f = [&](double x) {
        const double v = profile(std::exp(x));
        if (v == 0.0) return 0.0;
        return std::exp(2.0 * std::log(std::abs(v)) + 4.0 * alpha * std::log(std::hypot(1.0, x)) + 2.0 * x);
    };
    boost::math::quadrature::exp_sinh<double> quad;
    double err_right = 0.0;
    double err_left = 0.0;
    double right = 0.0;
    double left = 0.0;
    try {
        right = quad.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-10, &err_right);
        left = quad.integrate([&](double y) { return f(-y); }, 0.0, std::numeric_limits<double>::infinity(),
                              1e-10, &err_left);
    } catch (const std::exception&) {
        fail(ErrorKind::divergence, "decay integral of the Hankel profile diverges");
    }
    const double total = left + right;
    require(std::isfinite(total) && err_left + err_right <= 1e-6 * std::max(total, 1e-300),
            ErrorKind::divergence, "decay integral of the Hankel profile diverges");
    return total;
}

// --- free resolvent ------------------------------------------------------------

MatrixC resolvent_matrix(const SpectralPoint& z, const LogGrid& grid) {
    const std::size_t n = grid.size();
    const std::vector<cplx> a = kernel_table(z, grid);
    const VectorR sw = grid.weights().cwiseSqrt();
    const cplx scale = -1.0 / z.value();
    MatrixC out(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = scale * sw[i] * sw[j] * a[i > j ? i - j : j - i];
    out.diagonal().array() += scale;
    return out;
}

MatrixC limiting_absorption_resolvent(double lambda, Side side, const LogGrid& grid, double edge_margin) {
    require(std::isfinite(lambda) && lambda > 0.0 && lambda < pi, ErrorKind::domain,
            "limiting absorption needs lambda in (0, pi)");
    require(lambda >= edge_margin && lambda <= pi - edge_margin, ErrorKind::edge,
            "lambda too close to the spectral edges 0 or pi");
    return resolvent_matrix(SpectralPoint::boundary(lambda, side), grid);
}

VectorC apply_resolvent(const SpectralPoint& z, const LogGrid& grid, const VectorC& g) {
    require(static_cast<std::size_t>(g.size()) == grid.size(), ErrorKind::shape, "vector does not match the grid");
    const VectorC ag = apply_even_convolution(grid, kernel_table(z, grid), g);
    return (-1.0 / z.value()) * (g + ag);
}

VectorC apply_hamiltonian(const PerturbationKernel& kernel, const LogGrid& grid, const VectorC& g) {
    VectorC out = apply_carleman(grid, g);
    if (kernel.is_zero()) return out;
    const VectorR sw = grid.weights().cwiseSqrt();
    const VectorC u = sw.cast<cplx>().cwiseProduct(g);
    const VectorC vu = assemble_perturbation(kernel, grid).cast<cplx>() * u;
    return out + vu.cwiseQuotient(sw.cast<cplx>());
}

// --- Lippmann-Schwinger --------------------------------------------------------

EigenfunctionTable solve_lippmann_schwinger(const PerturbationKernel& kernel, double k, const LogGrid& grid,
                                            const LippmannSchwingerOptions& options) {
    require_momentum(k);
    require(options.side == Side::plus || options.side == Side::minus, ErrorKind::domain,
            "Lippmann-Schwinger side must be plus or minus");
    const std::size_t n = grid.size();
    const double lambda = lambda_of_k(k);
    const VectorR sw = grid.weights().cwiseSqrt();
    const MatrixC u0 = free_modes(grid, k);

    EigenfunctionTable table{k, grid, options.side, {}, {}};
    if (kernel.is_zero()) {
        table.psi1.resize(n);
        table.psi2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            table.psi1[i] = std::polar(1.0, k * grid.x(i));
            table.psi2[i] = std::polar(1.0, -k * grid.x(i));
        }
        return table;
    }

    const MatrixR v = assemble_perturbation(kernel, grid);
    const MatrixC r0 = limiting_absorption_resolvent(lambda, options.side, grid);

    // V psi^{(0)} must be negligible at the window ends: outside it the
    // truncated system has no equations.
    const MatrixC vu0 = real_times(v, u0);
    const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(tail_window * n));
    double peak = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = vu0.row(i).cwiseAbs().maxCoeff() / sw[i];
        peak = std::max(peak, a);
        if (i < edge || i >= n - edge) tail = std::max(tail, a);
    }
    table.tail = peak > 0.0 ? tail / peak : 0.0;
    require(table.tail <= options.tail_tolerance, ErrorKind::truncation,
            "V psi^(0) does not decay inside the window; widen the grid");

    MatrixC system = times_real(r0, v);
    system.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<MatrixC> lu(system);
    table.condition = 1.0 / lu.rcond();
    require(std::isfinite(table.condition) && table.condition <= options.condition_cap, ErrorKind::singular,
            "Lippmann-Schwinger system is near singular: lambda(k) may be an eigenvalue or singular point of H");
    const MatrixC u = lu.solve(u0);

    const MatrixC residual = system * u - u0;
    table.ls_residual = std::max(residual.col(0).norm() / u0.col(0).norm(), residual.col(1).norm() / u0.col(1).norm());

    table.psi1 = u.col(0).cwiseQuotient(sw.cast<cplx>());
    table.psi2 = u.col(1).cwiseQuotient(sw.cast<cplx>());

    const double center = 0.5 * (grid.x_min() + grid.x_max());
    const double half = 0.5 * options.interior_fraction * (grid.x_max() - grid.x_min());
    for (const VectorC* psi : {&table.psi1, &table.psi2}) {
        const VectorC r = apply_hamiltonian(kernel, grid, *psi) - lambda * *psi;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(grid.x(i) - center) > half) continue;
            sum += grid.weight(i) * std::norm(r[i]) / (1.0 + grid.x(i) * grid.x(i));
        }
        table.eigen_residual = std::max(table.eigen_residual, std::sqrt(sum));
    }
    return table;
}

// --- scattering matrix ---------------------------------------------------------

double gamma_factor(double k) {
    require_momentum(k);
    const double c = std::cosh(pi * k);
    return c * c / (pi * pi * std::sinh(pi * k));
}

Eigen::Matrix2cd ScatteringMatrix::matrix() const {
    Eigen::Matrix2cd m;
    m << s11, s21, s12, s22;
    return m;
}

ScatteringMatrix scattering_matrix(const EigenfunctionTable& plus_side, const PerturbationKernel& kernel) {
    require(plus_side.side == Side::plus, ErrorKind::precondition,
            "scattering matrix quadratures use psi^(-), the lambda + i0 solution");
    require_momentum(plus_side.k);
    const LogGrid& grid = plus_side.grid;
    const VectorR sw = grid.weights().cwiseSqrt();
    MatrixC u(grid.size(), 2);
    u.col(0) = plus_side.psi1.cwiseProduct(sw.cast<cplx>());
    u.col(1) = plus_side.psi2.cwiseProduct(sw.cast<cplx>());
    const MatrixC vu = kernel.is_zero() ? MatrixC::Zero(grid.size(), 2).eval()
                                        : real_times(assemble_perturbation(kernel, grid), u);
    return assemble_matrix(plus_side.k, grid, vu);
}

ScatteringMatrix scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid) {
    require_momentum(k);
    return scattering_matrix(solve_lippmann_schwinger(kernel, k, grid), kernel);
}

ScatteringMatrix stationary_scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid) {
    require_momentum(k);
    const MatrixC e = free_modes(grid, k);
    if (kernel.is_zero()) return assemble_matrix(k, grid, MatrixC::Zero(grid.size(), 2));
    const MatrixR v = assemble_perturbation(kernel, grid);
    const MatrixC r0 = limiting_absorption_resolvent(lambda_of_k(k), Side::plus, grid);
    // R V e = R_0 (I + V R_0)^{-1} V e
    MatrixC system = real_times(v, r0);
    system.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<MatrixC> lu(system);
    require(1.0 / lu.rcond() <= 1e10, ErrorKind::singular, "I + V R_0 is near singular");
    const MatrixC ve = real_times(v, e);
    const MatrixC rve = r0 * lu.solve(ve);
    const MatrixC te = ve - real_times(v, rve);
    return assemble_matrix(k, grid, te);
}

ScatteringMatrix born_scattering_matrix(const PerturbationKernel& kernel, double k, const LogGrid& grid) {
    require_momentum(k);
    const MatrixC e = free_modes(grid, k);
    if (kernel.is_zero()) return assemble_matrix(k, grid, MatrixC::Zero(grid.size(), 2));
    return assemble_matrix(k, grid, real_times(assemble_perturbation(kernel, grid), e));
}

// --- asymptotics ---------------------------------------------------------------

namespace {

EndCoefficients fit_end(const LogGrid& grid, const VectorC& g, double k, std::size_t first, std::size_t count,
                        double& residual) {
    Eigen::MatrixX2cd basis(count, 2);
    VectorC rhs(count);
    for (std::size_t r = 0; r < count; ++r) {
        const double x = grid.x(first + r);
        basis(r, 0) = std::polar(1.0, k * x);
        basis(r, 1) = std::polar(1.0, -k * x);
        rhs[r] = g[first + r];
    }
    const Eigen::Vector2cd c = basis.colPivHouseholderQr().solve(rhs);
    const double scale = std::max(rhs.norm(), 1e-300);
    residual = std::max(residual, (basis * c - rhs).norm() / scale);
    return {c[0], c[1]};
}

} // namespace

AsymptoticCoefficients extract_asymptotics(const EigenfunctionTable& table, double window_fraction,
                                           double tolerance) {
    require(window_fraction > 0.0 && window_fraction < 0.5, ErrorKind::domain, "end window fraction must be in (0, 0.5)");
    const LogGrid& grid = table.grid;
    const std::size_t n = grid.size();
    const std::size_t count = static_cast<std::size_t>(window_fraction * static_cast<double>(n));
    require(count >= 4, ErrorKind::grid_too_small, "end windows hold too few nodes for a fit");
    AsymptoticCoefficients out;
    double residual = 0.0;
    out.psi1_left = fit_end(grid, table.psi1, table.k, 0, count, residual);
    out.psi1_right = fit_end(grid, table.psi1, table.k, n - count, count, residual);
    out.psi2_left = fit_end(grid, table.psi2, table.k, 0, count, residual);
    out.psi2_right = fit_end(grid, table.psi2, table.k, n - count, count, residual);
    out.fit_residual = residual;
    require(residual <= tolerance, ErrorKind::grid_too_small,
            "eigenfunctions have not reached their free form in the end windows; widen the grid");
    return out;
}

} // namespace carleman
