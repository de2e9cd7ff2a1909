#include "folitor/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "folitor/kernels.hpp"

namespace folitor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_compatible(const FourierField& a, const FourierField& b) {
    if (a.dim() != b.dim()) throw ValidationError("field dimension mismatch");
    if (a.cutoff() != b.cutoff()) throw ValidationError("field cutoff mismatch");
}

std::size_t coeff_count(Torus dim, int cutoff) {
    const std::size_t s = 2 * static_cast<std::size_t>(cutoff) + 1;
    return dim == Torus::T3 ? s * s * s : s * s;
}
}  // namespace

FourierField::FourierField(Torus dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
    if (cutoff < 0) throw ValidationError("cutoff must be nonnegative");
    coeff_.assign(coeff_count(dim, cutoff), Complex{0.0, 0.0});
}

FourierField FourierField::constant(Torus dim, int cutoff, Complex value) {
    FourierField f(dim, cutoff);
    f.set(ModeIndex{}, value);
    return f;
}

FourierField FourierField::mode(Torus dim, int cutoff, ModeIndex n, Complex amplitude) {
    FourierField f(dim, cutoff);
    if (!f.in_band(n)) throw ValidationError("mode outside the cutoff band");
    f.set(n, amplitude);
    return f;
}

bool FourierField::in_band(ModeIndex n) const {
    if (dim_ == Torus::T2 && n.k != 0) return false;
    return linf_norm(n) <= cutoff_;
}

std::size_t FourierField::index_of(ModeIndex n) const {
    const std::size_t s = side();
    if (dim_ == Torus::T2)
        return static_cast<std::size_t>(n.p + cutoff_) * s + (n.m + cutoff_);
    return (static_cast<std::size_t>(n.p + cutoff_) * s + (n.m + cutoff_)) * s +
           (n.k + cutoff_);
}

ModeIndex FourierField::mode_at(std::size_t idx) const {
    const int s = side();
    if (dim_ == Torus::T2) {
        const int m = static_cast<int>(idx % s) - cutoff_;
        const int p = static_cast<int>(idx / s) - cutoff_;
        return {p, m, 0};
    }
    const int k = static_cast<int>(idx % s) - cutoff_;
    idx /= s;
    const int m = static_cast<int>(idx % s) - cutoff_;
    const int p = static_cast<int>(idx / s) - cutoff_;
    return {p, m, k};
}

Complex FourierField::at(ModeIndex n) const {
    if (!in_band(n)) return {0.0, 0.0};
    return coeff_[index_of(n)];
}

void FourierField::set(ModeIndex n, Complex value) {
    if (!in_band(n)) throw ValidationError("mode outside the cutoff band");
    coeff_[index_of(n)] = value;
}

FourierField FourierField::with_cutoff(int new_cutoff) const {
    FourierField out(dim_, new_cutoff);
    const int keep = std::min(cutoff_, new_cutoff);
    for (int p = -keep; p <= keep; ++p)
        for (int m = -keep; m <= keep; ++m) {
            if (dim_ == Torus::T2) {
                out.coeff_[out.index_of({p, m, 0})] = coeff_[index_of({p, m, 0})];
            } else {
                for (int k = -keep; k <= keep; ++k)
                    out.coeff_[out.index_of({p, m, k})] = coeff_[index_of({p, m, k})];
            }
        }
    return out;
}

FourierField FourierField::conjugated() const {
    FourierField out(dim_, cutoff_);
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        const ModeIndex n = mode_at(i);
        out.coeff_[out.index_of(-n)] = std::conj(coeff_[i]);
    }
    return out;
}

FourierField& FourierField::operator+=(const FourierField& other) {
    require_compatible(*this, other);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
    return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
    require_compatible(*this, other);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
    return *this;
}

FourierField& FourierField::operator*=(Complex s) {
    for (Complex& c : coeff_) c *= s;
    return *this;
}

namespace {
// Constant factors multiply exactly; everything else goes through the grid.
bool only_mean(const FourierField& f) {
    const std::size_t zero = f.index_of(ModeIndex{});
    for (std::size_t i = 0; i < f.size(); ++i)
        if (i != zero && f.coefficients()[i] != Complex{0.0, 0.0}) return false;
    return true;
}
}  // namespace

FourierField multiply_full(const FourierField& a, const FourierField& b) {
    require_compatible(a, b);
    const int m = a.cutoff();
    if (only_mean(a)) {
        FourierField out = b.with_cutoff(2 * m);
        out *= a.at(ModeIndex{});
        return out;
    }
    if (only_mean(b)) {
        FourierField out = a.with_cutoff(2 * m);
        out *= b.at(ModeIndex{});
        return out;
    }
    const int grid = 4 * m + 1;  // product band is 2m; 4m+1 nodes resolve it exactly
    const auto va = kernels::synthesize(a.dim(), m, a.coefficients(), grid);
    const auto vb = kernels::synthesize(b.dim(), m, b.coefficients(), grid);
    const auto vp = kernels::hadamard(va, vb);
    FourierField out(a.dim(), 2 * m);
    out.coefficients() = kernels::analyze(a.dim(), grid, vp, 2 * m);
    return out;
}

FourierField multiply(const FourierField& a, const FourierField& b, double* spill) {
    FourierField full = multiply_full(a, b);
    const int m = a.cutoff();
    FourierField out = full.with_cutoff(m);
    if (spill) {
        double dropped = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            if (!out.in_band(full.mode_at(i))) dropped += std::norm(full.coefficients()[i]);
        }
        *spill = std::sqrt(dropped);
    }
    return out;
}

FourierField partial_derivative(const FourierField& a, int axis) {
    if (axis < 1 || axis > axes_of(a.dim()))
        throw ValidationError("derivative axis invalid for this dimension");
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const ModeIndex n = out.mode_at(i);
        const int comp = axis == 1 ? n.p : axis == 2 ? n.m : n.k;
        c[i] *= Complex{0.0, static_cast<double>(comp)};
    }
    return out;
}

Complex average(const FourierField& a) { return a.at(ModeIndex{}); }

namespace {
std::vector<double> norm_weights(const FourierField& a, NormSpec spec) {
    std::vector<double> w(a.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const int n1 = l1_norm(a.mode_at(i));
        if (spec.kind == NormSpec::Kind::Sobolev) {
            double base = 1.0 + static_cast<double>(n1) * n1;
            double v = 1.0;
            for (int j = 0; j < spec.order; ++j) v *= base;
            w[i] = v;
        } else {
            w[i] = std::exp(n1 * spec.radius);
        }
    }
    return w;
}
}  // namespace

double norm(const FourierField& a, NormSpec spec) {
    return std::sqrt(kernels::weighted_sumsq(a.coefficients(), norm_weights(a, spec)));
}

Complex inner_product(const FourierField& a, const FourierField& b) {
    require_compatible(a, b);
    return kernels::dot(a.coefficients(), b.coefficients());
}

double coefficient_l1(const FourierField& a) {
    double s = 0.0;
    for (const Complex& c : a.coefficients()) s += std::abs(c);
    return s;
}

Complex evaluate(const FourierField& a, const double* x) {
    return kernels::evaluate_point(a.dim(), a.cutoff(), a.coefficients(), x);
}

GridExtrema grid_extrema(const FourierField& a, int points_per_axis) {
    const auto values = kernels::synthesize(a.dim(), a.cutoff(), a.coefficients(),
                                            points_per_axis);
    const auto ex = kernels::modulus_extrema(values);
    GridExtrema out;
    out.max_modulus = ex.max_value;
    out.min_modulus = ex.min_value;
    const int axes = axes_of(a.dim());
    auto coords = [&](std::size_t idx) {
        std::vector<double> x(axes);
        for (int ax = axes - 1; ax >= 0; --ax) {
            x[ax] = kTwoPi * static_cast<double>(idx % points_per_axis) / points_per_axis;
            idx /= points_per_axis;
        }
        return x;
    };
    out.argmax = coords(ex.argmax);
    out.argmin = coords(ex.argmin);
    return out;
}

double sup_estimate(const FourierField& a, int oversample) {
    if (oversample < 2) throw ValidationError("oversample must be >= 2");
    return grid_extrema(a, oversample * a.side()).max_modulus;
}

SupBound validated_sup_bound(const FourierField& a, int oversample) {
    if (oversample < 2) throw ValidationError("oversample must be >= 2");
    const int grid = oversample * a.side();
    SupBound out;
    out.grid_max = grid_extrema(a, grid).max_modulus;

    // Off-grid overshoot bound through g = |a|^2 (a trig polynomial of band
    // 2M): sup g <= grid_max(g) + min(first-order, second-order) correction.
    const FourierField g = multiply_full(a, a.conjugated());
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const ModeIndex n = g.mode_at(i);
        const double l2 = std::sqrt(static_cast<double>(n.p) * n.p +
                                    static_cast<double>(n.m) * n.m +
                                    static_cast<double>(n.k) * n.k);
        const double c = std::abs(g.coefficients()[i]);
        b1 += l2 * c;
        b2 += l2 * l2 * c;
    }
    const double h = kTwoPi / grid;
    const double half_diag = std::sqrt(static_cast<double>(axes_of(a.dim()))) * h / 2.0;
    const double corr = std::min(b1 * half_diag, 0.5 * b2 * half_diag * half_diag);
    const double gmax = out.grid_max * out.grid_max;
    out.upper_bound = std::sqrt(std::max(0.0, gmax + corr));
    return out;
}

std::vector<Complex> synthesize(const FourierField& a, int points_per_axis) {
    return kernels::synthesize(a.dim(), a.cutoff(), a.coefficients(), points_per_axis);
}

FourierField analyze(Torus dim, const std::vector<Complex>& values, int points_per_axis,
                     int band) {
    FourierField out(dim, band);
    out.coefficients() = kernels::analyze(dim, points_per_axis, values, band);
    return out;
}

}  // namespace folitor
