#include "folitor/rationals.hpp"

#include <cmath>
#include <stdexcept>

#include "folitor/types.hpp"

namespace folitor {

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ValidationError("slope must be finite");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [.5,1)
    const long long scaled = static_cast<long long>(std::ldexp(mant, 53));
    Rational r(scaled);
    const int shift = exp - 53;
    if (shift >= 0)
        r *= Rational(BigInt(1) << shift);
    else
        r /= Rational(BigInt(1) << (-shift));
    return r;
}

Rational liouville_constant(int k) {
    if (k < 1 || k > 8) throw ValidationError("liouville(k) supports 1 <= k <= 8");
    Rational sum(0);
    long long fact = 1;
    for (int j = 1; j <= k; ++j) {
        fact *= j;
        sum += Rational(1, BigInt(1) << fact);
    }
    return sum;
}

Slope parse_slope(const std::string& text) {
    if (text == "sqrt2") return Slope::from_double(std::sqrt(2.0));
    if (text == "sqrt3") return Slope::from_double(std::sqrt(3.0));
    if (text == "golden") return Slope::from_double((1.0 + std::sqrt(5.0)) / 2.0);
    if (text.rfind("liouville(", 0) == 0 && text.back() == ')') {
        const int k = std::stoi(text.substr(10, text.size() - 11));
        return Slope::from_rational(liouville_constant(k));
    }
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den == 0) throw ValidationError("slope denominator is zero");
        return Slope::from_rational(Rational(num, den));
    }
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw ValidationError("cannot parse slope '" + text + "'");
    return Slope::from_double(v);
}

std::vector<BigInt> continued_fraction(const Rational& x, std::size_t max_terms) {
    std::vector<BigInt> terms;
    Rational cur = x;
    while (terms.size() < max_terms) {
        BigInt fl = numerator(cur) / denominator(cur);
        if (cur < 0 && fl * denominator(cur) != numerator(cur)) --fl;  // floor
        terms.push_back(fl);
        cur -= Rational(fl);
        if (cur == 0) break;
        cur = Rational(1) / cur;
    }
    return terms;
}

std::vector<Convergent> convergents_of(const Rational& x, std::size_t max_terms) {
    const auto terms = continued_fraction(x, max_terms);
    std::vector<Convergent> out;
    BigInt p0 = 1, q0 = 0, p1 = terms.empty() ? BigInt(0) : terms[0], q1 = 1;
    if (!terms.empty()) out.push_back({p1, q1});
    for (std::size_t i = 1; i < terms.size(); ++i) {
        const BigInt p2 = terms[i] * p1 + p0;
        const BigInt q2 = terms[i] * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        out.push_back({p1, q1});
    }
    return out;
}

std::vector<Convergent> certified_convergents(const Slope& a, const BigInt& max_denominator,
                                              double spread) {
    Rational lo, hi;
    if (a.is_exact()) {
        lo = hi = *a.exact;
    } else {
        const Rational mid = rational_from_double(a.value);
        const double ulp = spread > 0 ? spread
                                      : std::abs(a.value) * std::numeric_limits<double>::epsilon();
        const Rational eps = rational_from_double(ulp > 0 ? ulp : 1e-300);
        lo = mid - eps;
        hi = mid + eps;
    }

    // Run the CF recursion on both interval endpoints simultaneously and stop
    // as soon as they disagree on the next term.
    std::vector<Convergent> out;
    BigInt p0 = 1, q0 = 0, p1, q1;
    Rational clo = lo, chi = hi;
    bool first = true;
    while (true) {
        BigInt flo = numerator(clo) / denominator(clo);
        if (clo < 0 && flo * denominator(clo) != numerator(clo)) --flo;
        BigInt fhi = numerator(chi) / denominator(chi);
        if (chi < 0 && fhi * denominator(chi) != numerator(chi)) --fhi;
        if (flo != fhi) break;  // interval too wide to certify further terms
        const BigInt term = flo;
        if (first) {
            p1 = term; q1 = 1;
            first = false;
        } else {
            const BigInt p2 = term * p1 + p0;
            const BigInt q2 = term * q1 + q0;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        }
        if (q1 > max_denominator) break;
        out.push_back({p1, q1});
        clo -= Rational(term);
        chi -= Rational(term);
        if (clo == 0 || chi == 0) break;  // exact rational exhausted
        if (clo < 0 || chi < 0) break;    // interval straddles an integer reciprocal
        // note reciprocal swaps the endpoints
        const Rational nlo = Rational(1) / chi;
        const Rational nhi = Rational(1) / clo;
        clo = nlo;
        chi = nhi;
    }
    return out;
}

}  // namespace folitor
