#pragma once

// Logarithmic grids and the discrete Mellin transform.
//
// A function f on (0, inf) is represented by g(x) = e^{x/2} f(e^x) sampled on
// a uniform grid in x = ln t. The map f -> g is unitary L2(R+) -> L2(R), and
// the Mellin transform becomes the Fourier transform
//   F(k) = (2 pi)^{-1/2} \int e^{-ikx} g(x) dx.
// All sample vectors in this library are g-values unless stated otherwise.

#include "carleman/spectral_core.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace carleman {

using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;

class LogGrid {
public:
    LogGrid(double x_min, double x_max, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double step() const noexcept { return h_; }

    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
    double t(std::size_t i) const;
    // Trapezoid weight for dx.
    double weight(std::size_t i) const noexcept;

    VectorR nodes() const;
    VectorR weights() const;

    bool same_as(const LogGrid& other) const noexcept;

    // Same center, n points, window width scaled by sqrt(n / size()).
    // Refining this way shrinks the step and widens the window together.
    LogGrid balanced_refinement(std::size_t n) const;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_;
};

// g_i = sqrt(t_i) f(t_i)
VectorC sample_log(const LogGrid& grid, const std::function<cplx(double)>& f_of_t);
// f_i = g_i / sqrt(t_i)
VectorC to_t_values(const LogGrid& grid, const VectorC& g);

// sqrt(sum w_i |g_i|^2); equals the L2(R+) norm of f.
double l2_norm(const LogGrid& grid, const VectorC& g);
cplx inner(const LogGrid& grid, const VectorC& a, const VectorC& b);

// Fraction of the squared norm in the outer `fraction` of the window.
double edge_mass(const LogGrid& grid, const VectorC& g, double fraction);

class MellinSpectrum {
public:
    MellinSpectrum(const LogGrid& grid, VectorC values, double tail_fraction);

    const LogGrid& grid() const noexcept { return grid_; }
    const VectorC& values() const noexcept { return values_; }
    VectorC& values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double dk() const noexcept { return dk_; }
    double k(std::size_t m) const noexcept;

    // Off-grid value from the trigonometric interpolant of the samples.
    cplx evaluate(double k) const;

    // sqrt(sum |F_m|^2 dk)
    double norm() const;

    // Edge mass fraction of the source samples and whether it exceeded 1e-10.
    double tail_fraction() const noexcept { return tail_fraction_; }
    bool truncation_warning() const noexcept { return tail_fraction_ > 1e-10; }

private:
    LogGrid grid_;
    VectorC values_;
    double dk_;
    double tail_fraction_;
    // Interpolation tables.
    double center_;
    std::vector<cplx> phase_;
    std::vector<double> sin_half_;
    std::vector<double> cos_half_;
};

MellinSpectrum mellin_forward(const LogGrid& grid, const VectorC& g);
VectorC mellin_inverse(const LogGrid& grid, const MellinSpectrum& spectrum);

// g-samples of the state with Mellin transform F(k). The inverse transform
// runs on a window `oversample` times longer at the same step, so periodic
// images of slowly decaying tails stay far from the returned window.
VectorC synthesize_state(const LogGrid& grid, const std::function<cplx(double)>& spectrum,
                         std::size_t oversample = 8);

// Symmetric matrix sqrt(w_i w_j) / (2 cosh((x_i - x_j)/2)): the Carleman
// operator in log coordinates, conjugated by the square-root weights.
MatrixR carleman_matrix(const LogGrid& grid);
// Direct quadrature of (Cf)(t) = \int (t+s)^{-1} f(s) ds on g-samples.
VectorC apply_carleman(const LogGrid& grid, const VectorC& g);

// (Kg)_i = sum_j w_j kern(x_i - x_j) g_j for an even convolution kernel
// given by its values at the offsets d*h, d = 0..n-1.
VectorC apply_even_convolution(const LogGrid& grid, const std::vector<cplx>& kernel_at_offset,
                               const VectorC& g);

enum class FunctionRoute { multiplier, kernel };

using OperatorFunction = std::function<cplx(double lambda)>;

// phi(C) g. The multiplier route is always available. The kernel route builds
// q(w) = pi^{-1} \int_0^inf cos(kw) phi(lambda(k)) dk and refuses (domain
// error) when phi(lambda(k)) does not decay in k.
VectorC apply_operator_function(const LogGrid& grid, const OperatorFunction& phi, const VectorC& g,
                                FunctionRoute route = FunctionRoute::multiplier);

// Convolution kernel q(d*h), d = 0..n-1, of the kernel route.
std::vector<cplx> operator_function_kernel(const LogGrid& grid, const OperatorFunction& phi);

} // namespace carleman
