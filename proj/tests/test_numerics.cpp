#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "accstab/numerics.hpp"

using namespace accstab;

namespace {

std::mt19937 rng(42);

Matrix random_matrix(Eigen::Index n, double span = 1.0) {
    std::uniform_real_distribution<double> dist(-span, span);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = dist(rng);
    return m;
}

// Gershgorin shift puts every eigenvalue strictly in the left half plane.
Matrix random_stable_matrix(Eigen::Index n) {
    Matrix m = random_matrix(n);
    const double shift = m.cwiseAbs().rowwise().sum().maxCoeff() + 0.1;
    return m - shift * Matrix::Identity(n, n);
}

double rel_err(const Matrix& got, const Matrix& want) {
    const double scale = std::max(want.norm(), 1e-300);
    return (got - want).norm() / scale;
}

}  // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("expm at t = 0 is the identity") {
    const Matrix a = random_matrix(4, 100.0);
    CHECK(rel_err(expm(a, 0.0), Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("expm of a diagonal matrix") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = -2.0;
    const Matrix e = expm(a, 1.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(std::abs(e(0, 1)) < 1e-15);
    CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("expm of a nilpotent matrix truncates the series") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    const Matrix e = expm(a, 1.0);
    CHECK(e(0, 0) == 1.0);
    CHECK(e(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e(1, 0) == 0.0);
    CHECK(e(1, 1) == 1.0);
}

TEST_CASE("expm input validation") {
    CHECK_THROWS_AS(expm(Matrix::Zero(2, 3), 1.0), Error);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad, 1.0), Error);
    try {
        expm(Matrix::Zero(2, 3), 1.0);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::dimension);
    }
}

TEST_CASE("expm semigroup property on random stable matrices") {
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_stable_matrix(4);
        const double s = dist(rng), t = dist(rng);
        CHECK(rel_err(expm(a, s) * expm(a, t), expm(a, s + t)) < 1e-10);
    }
}

TEST_CASE("expm accepts negative times") {
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_matrix(4, 2.0);
        const double t = 0.8;
        CHECK(rel_err(expm(a, -t) * expm(a, t), Matrix::Identity(4, 4)) < 1e-11);
    }
}

TEST_CASE("expm time derivative matches a finite difference") {
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_stable_matrix(4);
        const double t = 0.7;
        const double h = 1e-6;
        const Matrix fd = (expm(a, t + h) - expm(a, t - h)) / (2.0 * h);
        CHECK(rel_err(fd, a * expm(a, t)) < 1e-6);
    }
}

TEST_CASE("expm_integral of the zero matrix is t I") {
    const Matrix psi = expm_integral(Matrix::Zero(3, 3), 3.0);
    CHECK(rel_err(psi, 3.0 * Matrix::Identity(3, 3)) < 1e-14);
}

TEST_CASE("expm_integral at t = 0 is the zero matrix") {
    const Matrix a = random_matrix(4, 50.0);
    CHECK(expm_integral(a, 0.0).norm() == 0.0);
}

TEST_CASE("expm_integral rejects negative time") {
    CHECK_THROWS_AS(expm_integral(Matrix::Identity(2, 2), -1.0), Error);
}

TEST_CASE("expm_integral matches the closed form for invertible matrices") {
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = random_stable_matrix(4);  // stable => invertible
        const double t = 1.3;
        const Matrix closed =
            a.partialPivLu().solve(expm(a, t) - Matrix::Identity(4, 4));
        CHECK(rel_err(expm_integral(a, t), closed) < 1e-10);
    }
}

TEST_CASE("integral identity a psi + I = expm") {
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_matrix(4, 2.0);
        const double t = 0.9;
        const Matrix lhs = a * expm_integral(a, t) + Matrix::Identity(4, 4);
        CHECK(rel_err(lhs, expm(a, t)) < 1e-10);
    }
}

TEST_CASE("expm_double_integral closed forms") {
    const double t = 2.0;
    CHECK(rel_err(expm_double_integral(Matrix::Zero(3, 3), t),
                  0.5 * t * t * Matrix::Identity(3, 3)) < 1e-13);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_stable_matrix(4);
        const Matrix closed = a.partialPivLu().solve(
            expm_integral(a, t) - t * Matrix::Identity(4, 4));
        CHECK(rel_err(expm_double_integral(a, t), closed) < 1e-10);
    }
}

TEST_CASE("eigenvalues of a diagonal matrix") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = -1.2;
    const ComplexList eigs = eigenvalues(a);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].real() == doctest::Approx(-1.2));  // sorted by magnitude
    CHECK(eigs[1].real() == doctest::Approx(0.5));
    CHECK(eigs[0].imag() == 0.0);
}

TEST_CASE("eigenvalues of a rotation matrix") {
    const double theta = 0.73;
    Matrix a(2, 2);
    a << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const ComplexList eigs = eigenvalues(a);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].real() == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    CHECK(std::abs(eigs[0].imag()) == doctest::Approx(std::sin(theta)).epsilon(1e-12));
    CHECK(eigs[0].imag() == doctest::Approx(-eigs[1].imag()));
}

TEST_CASE("eigenvalues of a companion matrix against the quadratic formula") {
    // z^2 - z + 0.24: roots from the explicit formula.
    const double b = -1.0, c = 0.24;
    const double disc = std::sqrt(b * b - 4.0 * c);
    const double r1 = (-b + disc) / 2.0, r2 = (-b - disc) / 2.0;
    CHECK(r1 == doctest::Approx(0.6));
    CHECK(r2 == doctest::Approx(0.4));

    Matrix companion(2, 2);
    companion << 0.0, -c, 1.0, -b;
    const ComplexList eigs = eigenvalues(companion);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].real() == doctest::Approx(r1).epsilon(1e-12));
    CHECK(eigs[1].real() == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("spectrum is conjugate-symmetric and sums to the trace") {
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_matrix(4, 3.0);
        const ComplexList eigs = eigenvalues(a);
        REQUIRE(eigs.size() == 4);

        Complex sum(0.0, 0.0);
        for (const Complex& l : eigs) sum += l;
        CHECK(std::abs(sum.real() - a.trace()) < 1e-8 * std::max(1.0, std::abs(a.trace())));
        CHECK(std::abs(sum.imag()) < 1e-8);

        // Every eigenvalue with nonzero imaginary part has its conjugate present.
        for (const Complex& l : eigs) {
            if (l.imag() == 0.0) continue;
            bool found = false;
            for (const Complex& m : eigs) found |= (m == std::conj(l));
            CHECK(found);
        }
    }
}

TEST_CASE("eigenvalue residual via the smallest singular value") {
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_matrix(4, 2.0);
        const double scale = a.norm();
        for (const Complex& l : eigenvalues(a)) {
            Eigen::MatrixXcd shifted = a.cast<Complex>();
            shifted.diagonal().array() -= l;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
            // sigma_min = min ||(a - l I) v|| over unit v.
            CHECK(svd.singularValues().minCoeff() <= 1e-8 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("find_root_scalar on simple functions") {
    CHECK(find_root_scalar([](double t) { return t - 0.25; }, 0.0, 1.0, 1e-14) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(find_root_scalar([](double t) { return std::cos(t); }, 1.0, 2.0, 1e-14) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("find_root_scalar rejects a bracket without a sign change") {
    CHECK_THROWS_AS(find_root_scalar([](double t) { return 1.0 + t * t; }, 0.0, 1.0, 1e-12),
                    Error);
    try {
        find_root_scalar([](double t) { return 1.0 + t * t; }, 0.0, 1.0, 1e-12);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::bracket);
    }
}

TEST_CASE("find_root_scalar honors the bracket tolerance") {
    // A root with a steep slope on one side; verify |f| near zero at the result.
    const auto f = [](double t) { return std::tanh(50.0 * (t - 0.3)); };
    const double root = find_root_scalar(f, 0.0, 1.0, 1e-13);
    CHECK(std::abs(root - 0.3) < 1e-12);
}

TEST_SUITE_END();
