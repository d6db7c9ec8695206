#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "accstab/errors.hpp"

namespace accstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;

/// e^{a t} by scaling-and-squaring with diagonal Pade kernels.
/// t may be zero or negative. Relative accuracy ~1e-13 for the
/// well-conditioned 4x4 matrices this project works with.
Matrix expm(const Matrix& a, double t = 1.0);

/// Integral of the matrix exponential, psi(t) = int_0^t e^{a s} ds.
/// Computed through the exponential of the augmented block matrix
/// [[a, I], [0, 0]], so a singular `a` is fine. Requires t >= 0.
Matrix expm_integral(const Matrix& a, double t);

/// Second-order integral, int_0^t int_0^s e^{a r} dr ds, via the
/// 3N x 3N augmented block exponential. Requires t >= 0.
Matrix expm_double_integral(const Matrix& a, double t);

/// All eigenvalues of a real square matrix, with multiplicity, sorted by
/// descending magnitude (ties broken by real part, then imaginary part).
/// Complex values come in exact conjugate pairs.
ComplexList eigenvalues(const Matrix& m);

double spectral_radius(const ComplexList& eigs);
double max_real_part(const ComplexList& eigs);

/// Bracketed scalar root finding, Brent's method. Requires f(lo)*f(hi) <= 0;
/// converges to a bracket of width <= tol.
double find_root_scalar(const std::function<double(double)>& f, double lo, double hi,
                        double tol);

namespace detail {
void require_square(const Matrix& a, const char* who);
void require_finite(const Matrix& a, const char* who);
}  // namespace detail

}  // namespace accstab
