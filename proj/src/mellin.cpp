#include "carleman/mellin.hpp"

#include "carleman/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace carleman {

namespace {

// Fraction of the window (per side) used to measure tail mass.
constexpr double tail_window = 0.05;

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

// e^{2 pi i r / n} with the integer product reduced first.
cplx unit_root(std::size_t r, std::size_t n) {
    const double angle = 2.0 * pi * static_cast<double>(r % n) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

void fft_in_place(VectorC& v, int direction) {
    auto* data = reinterpret_cast<fftw_complex*>(v.data());
    // Planning touches FFTW's global state; only fftw_execute is reentrant.
    static std::mutex planner;
    fftw_plan plan;
    {
        std::lock_guard lock(planner);
        plan = fftw_plan_dft_1d(static_cast<int>(v.size()), data, data, direction, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
}

void require_shape(const LogGrid& grid, Eigen::Index size) {
    require(static_cast<std::size_t>(size) == grid.size(), ErrorKind::shape,
            "sample vector length does not match the grid");
}

} // namespace

// --- LogGrid -----------------------------------------------------------------

LogGrid::LogGrid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), h_(0.0) {
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, ErrorKind::domain,
            "grid bounds must be finite with x_max > x_min");
    require(n >= 2, ErrorKind::grid_too_small, "grid needs at least two points");
    h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

double LogGrid::t(std::size_t i) const { return std::exp(x(i)); }

double LogGrid::weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
}

VectorR LogGrid::nodes() const {
    VectorR out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    return out;
}

VectorR LogGrid::weights() const {
    VectorR out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = weight(i);
    return out;
}

bool LogGrid::same_as(const LogGrid& other) const noexcept {
    return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
}

LogGrid LogGrid::balanced_refinement(std::size_t n) const {
    const double center = 0.5 * (x_min_ + x_max_);
    const double half = 0.5 * (x_max_ - x_min_) *
                        std::sqrt(static_cast<double>(n) / static_cast<double>(n_));
    return LogGrid(center - half, center + half, n);
}

// --- sampling and norms ------------------------------------------------------

VectorC sample_log(const LogGrid& grid, const std::function<cplx(double)>& f_of_t) {
    VectorC g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        g[i] = std::sqrt(t) * f_of_t(t);
    }
    return g;
}

VectorC to_t_values(const LogGrid& grid, const VectorC& g) {
    require_shape(grid, g.size());
    VectorC f(g.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = g[i] * std::exp(-0.5 * grid.x(i));
    return f;
}

double l2_norm(const LogGrid& grid, const VectorC& g) {
    require_shape(grid, g.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weight(i) * std::norm(g[i]);
    return std::sqrt(acc);
}

cplx inner(const LogGrid& grid, const VectorC& a, const VectorC& b) {
    require_shape(grid, a.size());
    require_shape(grid, b.size());
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weight(i) * a[i] * std::conj(b[i]);
    return acc;
}

double edge_mass(const LogGrid& grid, const VectorC& g, double fraction) {
    require_shape(grid, g.size());
    const std::size_t n = grid.size();
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = grid.weight(i) * std::norm(g[i]);
        total += v;
        if (i < m || i + m >= n) edge += v;
    }
    return total > 0.0 ? edge / total : 0.0;
}

// --- spectrum ----------------------------------------------------------------

MellinSpectrum::MellinSpectrum(const LogGrid& grid, VectorC values, double tail_fraction)
    : grid_(grid), values_(std::move(values)), tail_fraction_(tail_fraction) {
    require_shape(grid_, values_.size());
    const std::size_t n = grid_.size();
    dk_ = 2.0 * pi / (static_cast<double>(n) * grid_.step());
    center_ = grid_.x_min() + 0.5 * static_cast<double>(n - 1) * grid_.step();
    phase_.resize(n);
    sin_half_.resize(n);
    cos_half_.resize(n);
    const std::size_t c = n / 2;
    for (std::size_t m = 0; m < n; ++m) {
        const double a = pi * (static_cast<double>(m) - static_cast<double>(c)) / static_cast<double>(n);
        sin_half_[m] = std::sin(a);
        cos_half_[m] = std::cos(a);
        const double sign = ((m + c) % 2 == 0) ? 1.0 : -1.0;
        phase_[m] = std::polar(sign, k(m) * center_);
    }
}

double MellinSpectrum::k(std::size_t m) const noexcept {
    const auto c = static_cast<double>(grid_.size() / 2);
    return (static_cast<double>(m) - c) * dk_;
}

cplx MellinSpectrum::evaluate(double k) const {
    // Dirichlet kernel of the n-point trigonometric interpolant,
    //   F(k) = sum_m F_m e^{i(k_m - k)c} sin(n a_m) / (n sin a_m),
    // a_m = (k_m - k) h / 2 and c the window center. With k_m h / 2 = pi (m - m0) / n
    // the numerator is -(-1)^{m - m0} sin(n k h / 2), leaving one division per term.
    const std::size_t n = grid_.size();
    const double b = 0.5 * k * grid_.step();
    const double sb = std::sin(b);
    const double cb = std::cos(b);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double den = sin_half_[m] * cb - cos_half_[m] * sb;
        if (std::abs(den) < 1e-14) return values_[m];
        acc += values_[m] * phase_[m] / den;
    }
    const double nd = static_cast<double>(n);
    return -std::sin(nd * b) / nd * std::polar(1.0, -k * center_) * acc;
}

double MellinSpectrum::norm() const { return std::sqrt(values_.squaredNorm() * dk_); }

MellinSpectrum mellin_forward(const LogGrid& grid, const VectorC& g) {
    require_shape(grid, g.size());
    const std::size_t n = grid.size();
    const std::size_t c = n / 2;
    VectorC work(n);
    for (std::size_t j = 0; j < n; ++j) work[j] = g[j] * unit_root(c * j, n);
    fft_in_place(work, FFTW_FORWARD);
    MellinSpectrum spec(grid, VectorC(n), edge_mass(grid, g, tail_window));
    const double scale = grid.step() * inv_sqrt_2pi;
    for (std::size_t m = 0; m < n; ++m)
        spec.values()[m] = scale * work[m] * std::polar(1.0, -spec.k(m) * grid.x_min());
    return spec;
}

VectorC mellin_inverse(const LogGrid& grid, const MellinSpectrum& spectrum) {
    require(grid.same_as(spectrum.grid()), ErrorKind::shape,
            "spectrum was computed on a different grid");
    const std::size_t n = grid.size();
    const std::size_t c = n / 2;
    VectorC work(n);
    for (std::size_t m = 0; m < n; ++m)
        work[m] = spectrum.values()[m] * std::polar(1.0, spectrum.k(m) * grid.x_min());
    fft_in_place(work, FFTW_BACKWARD);
    const double scale = spectrum.dk() * inv_sqrt_2pi;
    for (std::size_t j = 0; j < n; ++j) work[j] *= scale * std::conj(unit_root(c * j, n));
    return work;
}

// --- Carleman operator and convolutions --------------------------------------

MatrixR carleman_matrix(const LogGrid& grid) {
    const std::size_t n = grid.size();
    const double h = grid.step();
    std::vector<double> kern(n);
    for (std::size_t d = 0; d < n; ++d) kern[d] = 0.5 / std::cosh(0.5 * static_cast<double>(d) * h);
    const VectorR w = grid.weights().cwiseSqrt();
    MatrixR out(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out(i, j) = w[i] * w[j] * kern[i > j ? i - j : j - i];
    return out;
}

VectorC apply_even_convolution(const LogGrid& grid, const std::vector<cplx>& kernel_at_offset,
                               const VectorC& g) {
    require_shape(grid, g.size());
    const std::size_t n = grid.size();
    require(kernel_at_offset.size() >= n, ErrorKind::shape, "kernel table shorter than the grid");
    VectorC wg(n);
    for (std::size_t j = 0; j < n; ++j) wg[j] = grid.weight(j) * g[j];
    VectorC out = VectorC::Zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += kernel_at_offset[i - j] * wg[j];
        for (std::size_t j = i; j < n; ++j) acc += kernel_at_offset[j - i] * wg[j];
        out[i] = acc;
    }
    return out;
}

VectorC apply_carleman(const LogGrid& grid, const VectorC& g) {
    std::vector<cplx> kern(grid.size());
    for (std::size_t d = 0; d < kern.size(); ++d)
        kern[d] = 0.5 / std::cosh(0.5 * static_cast<double>(d) * grid.step());
    return apply_even_convolution(grid, kern, g);
}

std::vector<cplx> operator_function_kernel(const LogGrid& grid, const OperatorFunction& phi) {
    const std::size_t n = grid.size();
    const double w_max = static_cast<double>(n - 1) * grid.step();
    // Poisson summation: the k-trapezoid returns q periodized with period
    // 2 pi / dk, which is kept far beyond the window.
    const double dk = 2.0 * pi / (2.0 * w_max + 200.0);
    const double k_limit = 60.0;

    std::vector<cplx> samples;
    double peak = 0.0;
    bool decayed = false;
    for (std::size_t m = 0;; ++m) {
        const double k = static_cast<double>(m) * dk;
        if (k > k_limit) break;
        const cplx v = phi(lambda_of_k(k));
        peak = std::max(peak, std::abs(v));
        samples.push_back(v);
        if (m > 0 && std::abs(v) <= 1e-14 * peak) {
            decayed = true;
            break;
        }
    }
    require(decayed, ErrorKind::domain,
            "kernel route refused: phi(lambda(k)) does not decay as k grows; use the multiplier route");

    std::vector<cplx> q(n);
    for (std::size_t d = 0; d < n; ++d) {
        const double w = static_cast<double>(d) * grid.step();
        cplx acc = 0.5 * samples[0];
        for (std::size_t m = 1; m < samples.size(); ++m)
            acc += std::cos(static_cast<double>(m) * dk * w) * samples[m];
        q[d] = acc * dk / pi;
    }
    return q;
}

VectorC apply_operator_function(const LogGrid& grid, const OperatorFunction& phi, const VectorC& g,
                                FunctionRoute route) {
    require_shape(grid, g.size());
    if (route == FunctionRoute::kernel)
        return apply_even_convolution(grid, operator_function_kernel(grid, phi), g);
    // Zero padding to twice the length turns the circular convolution of
    // the discrete transform into a linear one on the original window.
    const std::size_t n = grid.size();
    const LogGrid padded(grid.x_min(), grid.x_min() + static_cast<double>(2 * n - 1) * grid.step(), 2 * n);
    VectorC work = VectorC::Zero(2 * n);
    work.head(n) = g;
    MellinSpectrum spec = mellin_forward(padded, work);
    for (std::size_t m = 0; m < spec.size(); ++m)
        spec.values()[m] *= phi(lambda_of_k(std::abs(spec.k(m))));
    return mellin_inverse(padded, spec).head(n);
}

VectorC synthesize_state(const LogGrid& grid, const std::function<cplx(double)>& spectrum,
                         std::size_t oversample) {
    require(oversample >= 1, ErrorKind::domain, "oversample must be at least 1");
    const std::size_t n = grid.size();
    const std::size_t big = n * oversample;
    const std::size_t offset = (big - n) / 2;
    const double x0 = grid.x_min() - static_cast<double>(offset) * grid.step();
    const LogGrid wide(x0, x0 + static_cast<double>(big - 1) * grid.step(), big);
    MellinSpectrum spec = mellin_forward(wide, VectorC::Zero(static_cast<Eigen::Index>(big)));
    for (std::size_t m = 0; m < spec.size(); ++m) spec.values()[m] = spectrum(spec.k(m));
    return mellin_inverse(wide, spec).segment(offset, n);
}

} // namespace carleman
