#include "carleman/error.hpp"
#include "carleman/mellin.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <random>

using namespace carleman;

namespace {

const LogGrid reference_grid(-40.0, 40.0, 4096);

VectorC log_gaussian(const LogGrid& grid, double center = 0.0, double width = 1.0) {
    VectorC g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = (grid.x(i) - center) / width;
        g[i] = std::exp(-0.5 * y * y);
    }
    return g;
}

double max_abs(const VectorC& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("log coordinates are an isometry") {
    // f(t) = t^{-1/2} exp(-ln^2 t / 2): ||f||^2 = sqrt(pi).
    auto f = [](double t) { const double l = std::log(t); return std::exp(-0.5 * l * l) / std::sqrt(t); };
    boost::math::quadrature::exp_sinh<double> integrator;
    const double oracle = integrator.integrate([&](double t) { return f(t) * f(t); }, 0.0,
                                               std::numeric_limits<double>::infinity());
    CHECK(std::abs(oracle - std::sqrt(pi)) < 1e-10);
    const VectorC g = sample_log(reference_grid, [&](double t) { return cplx(f(t), 0.0); });
    CHECK(std::abs(l2_norm(reference_grid, g) - std::sqrt(oracle)) < 1e-8);
    const VectorC back = to_t_values(reference_grid, g);
    CHECK(std::abs(back[2048] - f(reference_grid.t(2048))) < 1e-14);
}

TEST_CASE("Gaussian transform pair") {
    const VectorC g = log_gaussian(reference_grid);
    const MellinSpectrum spec = mellin_forward(reference_grid, g);
    double err = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double k = spec.k(m);
        err = std::max(err, std::abs(spec.values()[m] - std::exp(-0.5 * k * k)));
    }
    CHECK(err < 1e-10);
    CHECK(!spec.truncation_warning());
    for (double k : {0.0123, 0.5, -1.77, 3.0})
        CHECK(std::abs(spec.evaluate(k) - std::exp(-0.5 * k * k)) < 1e-10);
    // Off-center data: phase factor e^{-ik c}.
    const VectorC shifted = log_gaussian(reference_grid, 3.0, 1.0);
    const MellinSpectrum s2 = mellin_forward(reference_grid, shifted);
    CHECK(std::abs(s2.evaluate(0.7) - std::exp(-0.245) * std::polar(1.0, -2.1)) < 1e-10);
}

TEST_CASE("Parseval and round trip") {
    std::mt19937 gen(3);
    std::normal_distribution<double> nd;
    VectorC g = log_gaussian(reference_grid, 1.0, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= cplx(1.0 + 0.1 * nd(gen), 0.1 * nd(gen));
    const MellinSpectrum spec = mellin_forward(reference_grid, g);
    CHECK(std::abs(spec.norm() - l2_norm(reference_grid, g)) < 1e-8 * l2_norm(reference_grid, g));
    const VectorC back = mellin_inverse(reference_grid, spec);
    CHECK(max_abs(back - g) < 1e-8);

    // Linearity.
    const VectorC h = log_gaussian(reference_grid, -2.0, 0.7);
    const cplx a(0.3, -1.2);
    const VectorC lhs = mellin_forward(reference_grid, g + a * h).values();
    const VectorC rhs = spec.values() + a * mellin_forward(reference_grid, h).values();
    CHECK(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("tail mass raises the truncation warning") {
    VectorC g = VectorC::Ones(reference_grid.size());
    CHECK(mellin_forward(reference_grid, g).truncation_warning());
    CHECK(mellin_forward(reference_grid, g).tail_fraction() > 0.05);
}

TEST_CASE("inverse of a windowed pure mode") {
    const double k0 = 0.8;
    const double sigma = 2.0;
    MellinSpectrum spec = mellin_forward(reference_grid, VectorC::Zero(reference_grid.size()));
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double d = spec.k(m) - k0;
        spec.values()[m] = std::exp(-0.5 * d * d * sigma * sigma);
    }
    const VectorC g = mellin_inverse(reference_grid, spec);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = reference_grid.x(i);
        const cplx expected = std::polar(std::exp(-0.5 * x * x / (sigma * sigma)) / sigma, k0 * x);
        err = std::max(err, std::abs(g[i] - expected));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("shape mismatch") {
    const LogGrid other(-40.0, 40.0, 2048);
    const MellinSpectrum spec = mellin_forward(other, VectorC::Zero(2048));
    bool thrown = false;
    try {
        mellin_inverse(reference_grid, spec);
    } catch (const Error& e) {
        thrown = e.kind() == ErrorKind::shape;
    }
    CHECK(thrown);
}

TEST_CASE("Mellin transform diagonalizes the Carleman operator") {
    const VectorC g = log_gaussian(reference_grid, 0.5, 1.5);
    const MellinSpectrum spec = mellin_forward(reference_grid, g);
    const MellinSpectrum image = mellin_forward(reference_grid, apply_carleman(reference_grid, g));
    double err = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m)
        err = std::max(err, std::abs(image.values()[m] - lambda_of_k(std::abs(spec.k(m))) * spec.values()[m]));
    CHECK(err < 1e-6);
}

TEST_CASE("operator functions: routes agree") {
    const VectorC g = log_gaussian(reference_grid, -1.0, 2.0);
    const auto identity = [](double) { return cplx(1.0, 0.0); };
    const auto lin = [](double l) { return cplx(l, 0.0); };
    const auto sq = [](double l) { return cplx(l * l, 0.0); };

    CHECK(max_abs(apply_operator_function(reference_grid, identity, g) - g) < 1e-12);

    const VectorC direct = apply_carleman(reference_grid, g);
    CHECK(max_abs(apply_operator_function(reference_grid, lin, g) - direct) < 1e-6);
    CHECK(max_abs(apply_operator_function(reference_grid, lin, g, FunctionRoute::kernel) - direct) < 1e-6);

    const VectorC m2 = apply_operator_function(reference_grid, sq, g);
    const VectorC k2 = apply_operator_function(reference_grid, sq, g, FunctionRoute::kernel);
    CHECK(max_abs(m2 - k2) < 1e-6);
    CHECK(max_abs(m2 - apply_carleman(reference_grid, direct)) < 1e-6);

    bool refused = false;
    try {
        apply_operator_function(reference_grid, identity, g, FunctionRoute::kernel);
    } catch (const Error& e) {
        refused = e.kind() == ErrorKind::domain;
    }
    CHECK(refused);
}

TEST_CASE("free modes are eigenfunctions") {
    // Gaussian window of width sigma around e^{ikx}. At x = 0 the first
    // correction to lambda(k) g is lambda''(k) / (2 sigma^2) g.
    const LogGrid grid(-200.0, 200.0, 4097);
    const double sigma = 40.0;
    for (double k : {0.2, 0.5, 1.3}) {
        VectorC g(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid.x(i);
            g[i] = std::polar(std::exp(-0.5 * x * x / (sigma * sigma)), k * x);
        }
        const VectorC cg = apply_carleman(grid, g);
        const double d = 1e-3;
        const double lpp = (lambda_of_k(k + d) - 2.0 * lambda_of_k(k) + lambda_of_k(k - d)) / (d * d);
        const std::size_t mid = grid.size() / 2;
        const double x = grid.x(mid);
        const cplx expected = (lambda_of_k(k) + lpp / (2.0 * sigma * sigma)) * g[mid];
        CHECK(std::abs(x) < 1e-12);
        CHECK(std::abs(cg[mid] - expected) < 1e-4);
        CHECK(std::abs(cg[mid] - lambda_of_k(k) * g[mid]) < 1e-2);
    }
}

TEST_CASE("Carleman matrix spectrum") {
    double prev_top = 0.0;
    for (double half : {10.0, 20.0, 40.0}) {
        const LogGrid grid(-half, half, static_cast<std::size_t>(25.6 * half) + 1);
        const MatrixR c = carleman_matrix(grid);
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<MatrixR> es(c, Eigen::EigenvaluesOnly);
        const VectorR ev = es.eigenvalues();
        CHECK(ev.minCoeff() > -1e-10);
        CHECK(ev.maxCoeff() < pi);
        CHECK(ev.maxCoeff() > prev_top);
        prev_top = ev.maxCoeff();
    }
}
