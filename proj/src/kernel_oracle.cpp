#include "folitor/kernel_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace folitor {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

Vector solve_normal(const Eigen::PartialPivLU<Matrix>& lu, const Vector& x) {
    // (A^H A)^{-1} x = A^{-1} (A^{-H} x); the adjoint solve reuses the same
    // factorization: A^H = U^H L^H P, so A^{-H} x = P^T L^{-H} U^{-H} x.
    const Matrix& f = lu.matrixLU();
    Vector y = f.triangularView<Eigen::Upper>().adjoint().solve(x);
    y = f.triangularView<Eigen::UnitLower>().adjoint().solve(y);
    y = lu.permutationP().transpose() * y;
    // forward solve A z = y
    return lu.solve(y);
}

}  // namespace

KernelOracleResult kernel_oracle(const FoliationParams& params, const FourierField& mu,
                                 int cutoff) {
    const FourierField mu_c = mu.cutoff() == cutoff ? mu : mu.with_cutoff(cutoff);
    const Torus dim = mu.dim();
    FourierField shape(dim, cutoff);
    const Eigen::Index n = static_cast<Eigen::Index>(shape.size());
    if (n > 6000) throw ValidationError("kernel oracle cutoff too large for a dense solve");
    if (dim == Torus::T3 && !leaves_dense_at_cutoff(params, cutoff))
        throw ValidationError("leaves not dense at this cutoff");

    // Row N: lambda'_N y_N - lambda_N sum_{N'} mu_{N-N'} y_{N'}, the same
    // band truncation the ODE path uses.
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const ModeIndex nr = shape.mode_at(static_cast<std::size_t>(r));
        a(r, r) += lambda_prime_of(params, nr, dim);
        const Complex lam = lambda_of(params, nr, dim);
        if (lam == Complex{0.0, 0.0}) continue;
        for (Eigen::Index c = 0; c < n; ++c) {
            const ModeIndex nc = shape.mode_at(static_cast<std::size_t>(c));
            const ModeIndex dmode{nr.p - nc.p, nr.m - nc.m, nr.k - nc.k};
            if (!mu_c.in_band(dmode)) continue;
            const Complex m = mu_c.at(dmode);
            if (m != Complex{0.0, 0.0}) a(r, c) -= lam * m;
        }
    }

    // Tiny diagonal shift keeps the factorization regular when the kernel is
    // exact; all reported values use the unshifted operator.
    const double scale = a.cwiseAbs().maxCoeff();
    Matrix shifted = a;
    const double shift = std::max(scale, 1.0) * 1e-13;
    shifted.diagonal().array() += Complex{shift, 0.0};
    const Eigen::PartialPivLU<Matrix> lu(shifted);

    // Inverse iteration for the smallest right-singular vector.
    Vector v = Vector::Zero(n);
    const std::size_t zero_idx = shape.index_of(ModeIndex{});
    v(static_cast<Eigen::Index>(zero_idx)) = 1.0;  // constants are the expected kernel
    for (int it = 0; it < 8; ++it) {
        v = solve_normal(lu, v);
        v /= v.norm();
    }
    const double sigma1 = (a * v).norm();

    // Deflated iteration estimates the runner-up singular value.
    Vector w = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    w -= v * v.dot(w);
    if (w.norm() < 1e-8) {
        w = Vector::Zero(n);
        w(0) = 1.0;
        w -= v * v.dot(w);
    }
    w /= w.norm();
    double sigma2 = (a * w).norm();
    for (int it = 0; it < 40; ++it) {
        w = solve_normal(lu, w);
        w -= v * v.dot(w);
        const double nw = w.norm();
        if (nw == 0.0) break;
        w /= nw;
        sigma2 = (a * w).norm();
    }

    KernelOracleResult out;
    out.sigma1 = sigma1;
    out.sigma2 = sigma2;
    out.ambiguous = !(sigma2 > 10.0 * std::max(sigma1, 1e-14 * std::max(scale, 1.0)));

    FourierField field(dim, cutoff);
    for (Eigen::Index i = 0; i < n; ++i)
        field.coefficients()[static_cast<std::size_t>(i)] = v(i);
    const Complex avg = average(field);
    const double fn = norm(field, NormSpec::sobolev(0));
    if (std::abs(avg) > 1e-8 * fn) {
        field *= Complex{1.0, 0.0} / avg;
        out.average_normalized = true;
    } else {
        Complex big{0.0, 0.0};
        for (const Complex& c : field.coefficients())
            if (std::abs(c) > std::abs(big)) big = c;
        if (big != Complex{0.0, 0.0}) field *= Complex{1.0, 0.0} / big;
    }
    out.field = std::move(field);
    return out;
}

}  // namespace folitor
