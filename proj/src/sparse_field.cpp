#include "folitor/sparse_field.hpp"

#include <cmath>

namespace folitor {

SparseField SparseField::constant(Complex value) {
    SparseField f;
    if (value != Complex{0.0, 0.0}) f.c_[Mode64{}] = value;
    return f;
}

Complex SparseField::at(Mode64 n) const {
    const auto it = c_.find(n);
    return it == c_.end() ? Complex{0.0, 0.0} : it->second;
}

void SparseField::add(Mode64 n, Complex value, double drop_below) {
    const auto it = c_.find(n);
    Complex next = value + (it == c_.end() ? Complex{0.0, 0.0} : it->second);
    if (std::abs(next) <= drop_below)
        { if (it != c_.end()) c_.erase(it); return; }
    c_[n] = next;
}

double SparseField::h0_norm() const {
    double s = 0.0;
    for (const auto& [n, v] : c_) s += std::norm(v);
    return std::sqrt(s);
}

double SparseField::coefficient_l1() const {
    double s = 0.0;
    for (const auto& [n, v] : c_) s += std::abs(v);
    return s;
}

SparseField& SparseField::operator+=(const SparseField& other) {
    for (const auto& [n, v] : other.c_) add(n, v);
    return *this;
}

SparseField& SparseField::operator-=(const SparseField& other) {
    for (const auto& [n, v] : other.c_) add(n, -v);
    return *this;
}

SparseField& SparseField::operator*=(Complex s) {
    if (s == Complex{0.0, 0.0}) {
        c_.clear();
        return *this;
    }
    for (auto& [n, v] : c_) v *= s;
    return *this;
}

SparseField SparseField::multiply(const SparseField& a, const SparseField& b,
                                  double drop_below, double* dropped) {
    SparseField out;
    double lost = 0.0;
    for (const auto& [na, va] : a.c_)
        for (const auto& [nb, vb] : b.c_) {
            const Complex v = va * vb;
            if (std::abs(v) <= drop_below) {
                lost += std::abs(v);
                continue;
            }
            out.add(na + nb, v);
        }
    if (dropped) *dropped = lost;
    return out;
}

SparseField SparseField::mapped(const std::function<Complex(Mode64)>& symbol) const {
    SparseField out;
    for (const auto& [n, v] : c_) {
        const Complex s = symbol(n) * v;
        if (s != Complex{0.0, 0.0}) out.c_[n] = s;
    }
    return out;
}

SparseField SparseField::reciprocal(const SparseField& f, double tol, int max_terms) {
    const Complex c0 = f.average();
    if (c0 == Complex{0.0, 0.0})
        throw ValidationError("sparse reciprocal needs a nonzero mean");
    SparseField g = f;  // g = (f - c0)/c0, the contraction part
    g.add(Mode64{}, -c0);
    g *= Complex{1.0, 0.0} / c0;
    const double rho = g.coefficient_l1();
    if (!(rho < 1.0))
        throw NumericalError("sparse reciprocal: series not dominated (l1 ratio >= 1)");

    // 1/f = (1/c0) sum (-g)^n, remainder after n terms bounded by rho^{n+1}/(1-rho)
    SparseField acc = SparseField::constant(Complex{1.0, 0.0});
    SparseField power = SparseField::constant(Complex{1.0, 0.0});
    double tail = rho / (1.0 - rho);
    for (int n = 1; n <= max_terms && tail > tol; ++n) {
        power = multiply(power, g, tol * 1e-3 / std::max(1, max_terms));
        power *= Complex{-1.0, 0.0};
        acc += power;
        tail *= rho;
    }
    acc *= Complex{1.0, 0.0} / c0;
    return acc;
}

Complex lambda_wide(const FoliationParams& params, Mode64 n) {
    if (params.is_exact()) {
        const Rational re = (Rational(n.m) + Rational(n.k) * *params.a2.exact) / 2;
        const Rational im = (Rational(n.p) + Rational(n.k) * *params.a1.exact) / 2;
        return {to_double(re), to_double(im)};
    }
    return {0.5 * (static_cast<double>(n.m) + static_cast<double>(n.k) * params.a2.value),
            0.5 * (static_cast<double>(n.p) + static_cast<double>(n.k) * params.a1.value)};
}

double sparse_closedness_residual(const FoliationParams& params, const SparseField& nu,
                                  const SparseField& f) {
    SparseField lhs = f.mapped([&](Mode64 n) { return -std::conj(lambda_wide(params, n)); });
    SparseField prod = SparseField::multiply(nu, f);
    SparseField rhs = prod.mapped([&](Mode64 n) { return lambda_wide(params, n); });
    lhs -= rhs;
    return lhs.h0_norm() / std::max(1.0, f.h0_norm());
}

}  // namespace folitor
