#include "accstab/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace accstab {

namespace detail {

void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream os;
        os << who << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
        raise(ErrorCategory::dimension, os.str());
    }
}

void require_finite(const Matrix& a, const char* who) {
    if (!a.allFinite()) {
        raise(ErrorCategory::domain, std::string(who) + ": matrix has non-finite entries");
    }
}

}  // namespace detail

namespace {

// Diagonal Pade approximants of e^M, Higham (2005) coefficients.
// U collects the odd powers, V the even ones; e^M ~ (V - U)^{-1} (V + U).

void pade3(const Matrix& m, const Matrix& m2, Matrix& u, Matrix& v) {
    static const double b[] = {120., 60., 12., 1.};
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    u = m * (b[3] * m2 + b[1] * id);
    v = b[2] * m2 + b[0] * id;
}

void pade5(const Matrix& m, const Matrix& m2, Matrix& u, Matrix& v) {
    static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    const Matrix m4 = m2 * m2;
    u = m * (b[5] * m4 + b[3] * m2 + b[1] * id);
    v = b[4] * m4 + b[2] * m2 + b[0] * id;
}

void pade7(const Matrix& m, const Matrix& m2, Matrix& u, Matrix& v) {
    static const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    const Matrix m4 = m2 * m2;
    const Matrix m6 = m4 * m2;
    u = m * (b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * id);
    v = b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
}

void pade9(const Matrix& m, const Matrix& m2, Matrix& u, Matrix& v) {
    static const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                               2162160.,     110880.,     3960.,       90.,        1.};
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    const Matrix m4 = m2 * m2;
    const Matrix m6 = m4 * m2;
    const Matrix m8 = m6 * m2;
    u = m * (b[9] * m8 + b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * id);
    v = b[8] * m8 + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
}

void pade13(const Matrix& m, const Matrix& m2, Matrix& u, Matrix& v) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    const Matrix m4 = m2 * m2;
    const Matrix m6 = m4 * m2;
    u = m * (m6 * (b[13] * m6 + b[11] * m4 + b[9] * m2) + b[7] * m6 + b[5] * m4 + b[3] * m2 +
             b[1] * id);
    v = m6 * (b[12] * m6 + b[10] * m4 + b[8] * m2) + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& a, double t) {
    detail::require_square(a, "expm");
    detail::require_finite(a, "expm");
    if (!std::isfinite(t)) {
        raise(ErrorCategory::domain, "expm: time argument is not finite");
    }

    Matrix m = a * t;
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm

    int squarings = 0;
    Matrix u, v;
    if (norm < 1.495585217958292e-2) {
        pade3(m, m * m, u, v);
    } else if (norm < 2.539398330063230e-1) {
        pade5(m, m * m, u, v);
    } else if (norm < 9.504178996162932e-1) {
        pade7(m, m * m, u, v);
    } else if (norm < 2.097847961257068e0) {
        pade9(m, m * m, u, v);
    } else {
        const double theta13 = 5.371920351148152e0;
        if (norm > theta13) {
            squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        }
        m *= std::pow(2.0, -squarings);
        pade13(m, m * m, u, v);
    }

    Matrix result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

Matrix expm_integral(const Matrix& a, double t) {
    detail::require_square(a, "expm_integral");
    detail::require_finite(a, "expm_integral");
    if (!(t >= 0.0)) {
        raise(ErrorCategory::domain, "expm_integral: requires t >= 0");
    }
    const Eigen::Index n = a.rows();
    Matrix aug = Matrix::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a;
    aug.topRightCorner(n, n) = Matrix::Identity(n, n);
    return expm(aug, t).topRightCorner(n, n);
}

Matrix expm_double_integral(const Matrix& a, double t) {
    detail::require_square(a, "expm_double_integral");
    detail::require_finite(a, "expm_double_integral");
    if (!(t >= 0.0)) {
        raise(ErrorCategory::domain, "expm_double_integral: requires t >= 0");
    }
    const Eigen::Index n = a.rows();
    Matrix aug = Matrix::Zero(3 * n, 3 * n);
    aug.topLeftCorner(n, n) = a;
    aug.block(0, n, n, n) = Matrix::Identity(n, n);
    aug.block(n, 2 * n, n, n) = Matrix::Identity(n, n);
    return expm(aug, t).block(0, 2 * n, n, n);
}

ComplexList eigenvalues(const Matrix& m) {
    detail::require_square(m, "eigenvalues");
    detail::require_finite(m, "eigenvalues");

    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigenvalues: QR iteration failed to converge on matrix\n" << m;
        raise(ErrorCategory::convergence, os.str());
    }

    ComplexList eigs(solver.eigenvalues().data(),
                     solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return eigs;
}

double spectral_radius(const ComplexList& eigs) {
    double r = 0.0;
    for (const Complex& l : eigs) r = std::max(r, std::abs(l));
    return r;
}

double max_real_part(const ComplexList& eigs) {
    double r = -std::numeric_limits<double>::infinity();
    for (const Complex& l : eigs) r = std::max(r, l.real());
    return r;
}

double find_root_scalar(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
    constexpr int kMaxIterations = 200;
    constexpr double kEps = 3.0e-16;

    double a = lo, b = hi, c = hi;
    double fa = f(a), fb = f(b), fc = fb;

    if (fa * fb > 0.0) {
        std::ostringstream os;
        os << "find_root_scalar: no sign change in bracket: f(" << a << ")=" << fa << ", f(" << b
           << ")=" << fb;
        raise(ErrorCategory::bracket, os.str());
    }

    double d = b - a, e = b - a;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, falling back to secant.
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1) {
            b += d;
        } else {
            b += (xm > 0.0 ? tol1 : -tol1);
        }
        fb = f(b);
    }
    raise(ErrorCategory::convergence, "find_root_scalar: iteration limit exceeded");
}

}  // namespace accstab
