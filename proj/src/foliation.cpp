#include "folitor/foliation.hpp"

#include <cmath>

namespace folitor {

Complex lambda_of(const FoliationParams& params, ModeIndex n, Torus dim) {
    if (dim == Torus::T2) return {0.5 * n.m, 0.5 * n.p};
    const double re = 0.5 * (n.m + n.k * params.a2.value);
    const double im = 0.5 * (n.p + n.k * params.a1.value);
    return {re, im};
}

Complex lambda_prime_of(const FoliationParams& params, ModeIndex n, Torus dim) {
    return -std::conj(lambda_of(params, n, dim));
}

Complex u_of(const FoliationParams& params, ModeIndex n, Torus dim) {
    const Complex lam = lambda_of(params, n, dim);
    if (lam == Complex{0.0, 0.0}) return {1.0, 0.0};
    return -lam / std::conj(lam);
}

std::optional<std::pair<Rational, Rational>> lambda_exact(const FoliationParams& params,
                                                          ModeIndex n) {
    if (!params.is_exact()) return std::nullopt;
    Rational re = (Rational(n.m) + Rational(n.k) * *params.a2.exact) / 2;
    Rational im = (Rational(n.p) + Rational(n.k) * *params.a1.exact) / 2;
    return std::make_pair(re, im);
}

MultiplierSymbol dz_symbol(const FoliationParams& params, Torus dim) {
    return {MultiplierSymbol::Tag::Dz,
            [params, dim](ModeIndex n) { return lambda_of(params, n, dim); }};
}

MultiplierSymbol dzbar_symbol(const FoliationParams& params, Torus dim) {
    return {MultiplierSymbol::Tag::Dzbar,
            [params, dim](ModeIndex n) { return lambda_prime_of(params, n, dim); }};
}

MultiplierSymbol u_symbol(const FoliationParams& params, Torus dim) {
    return {MultiplierSymbol::Tag::U,
            [params, dim](ModeIndex n) { return u_of(params, n, dim); }};
}

MultiplierSymbol u_inverse_symbol(const FoliationParams& params, Torus dim) {
    return {MultiplierSymbol::Tag::Uinv, [params, dim](ModeIndex n) {
                return std::conj(u_of(params, n, dim));  // |u| = 1
            }};
}

FourierField apply_symbol(const MultiplierSymbol& sym, const FourierField& a) {
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= sym.symbol(out.mode_at(i));
    return out;
}

FourierField apply_dz(const FoliationParams& params, const FourierField& a) {
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= lambda_of(params, out.mode_at(i), a.dim());
    return out;
}

FourierField apply_dzbar(const FoliationParams& params, const FourierField& a) {
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] *= lambda_prime_of(params, out.mode_at(i), a.dim());
    return out;
}

FourierField apply_u(const FoliationParams& params, const FourierField& a,
                     UDirection direction) {
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Complex u = u_of(params, out.mode_at(i), a.dim());
        c[i] *= direction == UDirection::Forward ? u : std::conj(u);
    }
    return out;
}

FourierField apply_dz_inverse(const FoliationParams& params, const FourierField& a) {
    const double avg = std::abs(average(a));
    if (avg > 1e-12 * std::max(1.0, norm(a, NormSpec::sobolev(0))))
        throw ValidationError("not in the domain of D_z^{-1}: nonzero average");
    FourierField out = a;
    auto& c = out.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const ModeIndex n = out.mode_at(i);
        if (n == ModeIndex{}) {
            c[i] = {0.0, 0.0};
            continue;
        }
        if (c[i] == Complex{0.0, 0.0}) continue;
        const Complex lam = lambda_of(params, n, a.dim());
        bool zero = lam == Complex{0.0, 0.0};
        if (!zero && params.is_exact() && a.dim() == Torus::T3) {
            const auto ex = lambda_exact(params, n);
            zero = ex && ex->first == 0 && ex->second == 0;
        }
        if (zero) throw ValidationError("leaves not dense: lambda vanishes at a required mode");
        c[i] /= lam;
    }
    return out;
}

namespace {
// Zeros come in +/- pairs; report the representative with positive leading
// nonzero component.
ModeIndex canonical_sign(ModeIndex n) {
    if (n.p < 0 || (n.p == 0 && n.m < 0) || (n.p == 0 && n.m == 0 && n.k < 0)) return -n;
    return n;
}
}  // namespace

Resonance exact_resonance(const FoliationParams& params) {
    Resonance res;
    if (!params.is_exact()) return res;
    // k a1 and k a2 are both integral exactly when k is a multiple of
    // lcm(den a1, den a2); the smallest such k gives the resonance.
    const BigInt d1 = denominator(*params.a1.exact);
    const BigInt d2 = denominator(*params.a2.exact);
    const BigInt k0 = d1 / gcd(d1, d2) * d2;
    res.exists = true;
    res.denominator = k0;
    if (k0 < (BigInt(1) << 31)) {
        const long long k = k0.convert_to<long long>();
        const Rational rp = -Rational(k) * *params.a1.exact;
        const Rational rm = -Rational(k) * *params.a2.exact;
        const BigInt p = numerator(rp);
        const BigInt m = numerator(rm);
        if (abs(p) < (BigInt(1) << 31) && abs(m) < (BigInt(1) << 31)) {
            res.mode = canonical_sign(ModeIndex{static_cast<int>(p.convert_to<long long>()),
                                                static_cast<int>(m.convert_to<long long>()),
                                                static_cast<int>(k)});
        }
    }
    return res;
}

DensityReport density_check(const FoliationParams& params, int cutoff) {
    if (cutoff < 1) throw ValidationError("density scan needs cutoff >= 1");
    DensityReport rep;
    rep.scanned_cutoff = cutoff;
    rep.min_abs_lambda = std::numeric_limits<double>::infinity();
    for (int p = -cutoff; p <= cutoff; ++p)
        for (int m = -cutoff; m <= cutoff; ++m)
            for (int k = -cutoff; k <= cutoff; ++k) {
                if (p == 0 && m == 0 && k == 0) continue;
                const ModeIndex n{p, m, k};
                const double v = std::abs(lambda_of(params, n));
                if (v < rep.min_abs_lambda) {
                    rep.min_abs_lambda = v;
                    rep.argmin = n;
                }
            }

    const Resonance res = exact_resonance(params);
    if (res.exists) {
        rep.exact_zero_exists = true;
        rep.resonance_denominator = res.denominator;
        if (res.mode && linf_norm(*res.mode) <= cutoff) {
            rep.zero_in_band = true;
            rep.zero_mode = *res.mode;
            rep.min_abs_lambda = 0.0;
            rep.argmin = *rep.zero_mode;
        }
    } else if (rep.min_abs_lambda == 0.0) {
        rep.zero_in_band = true;
        rep.exact_zero_exists = true;
        rep.zero_mode = canonical_sign(rep.argmin);
    }
    return rep;
}

bool leaves_dense_at_cutoff(const FoliationParams& params, int cutoff) {
    const DensityReport rep = density_check(params, cutoff);
    return !rep.zero_in_band && rep.min_abs_lambda > 0.0;
}

}  // namespace folitor
