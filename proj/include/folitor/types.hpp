#pragma once

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace folitor {

using Complex = std::complex<double>;

enum class Torus { T3, T2 };

inline int axes_of(Torus dim) { return dim == Torus::T3 ? 3 : 2; }

// A Fourier mode (p, m, k) on the 3-torus; on the 2-torus the components are
// (n1, n2) and k stays 0.
struct ModeIndex {
    int p = 0;
    int m = 0;
    int k = 0;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// |N| = |p| + |m| + |k| throughout the library (norm weights, Diophantine
// scans, smoothness certificates).
inline int l1_norm(ModeIndex n) { return std::abs(n.p) + std::abs(n.m) + std::abs(n.k); }

inline int linf_norm(ModeIndex n) {
    return std::max(std::abs(n.p), std::max(std::abs(n.m), std::abs(n.k)));
}

inline ModeIndex operator-(ModeIndex n) { return {-n.p, -n.m, -n.k}; }
inline ModeIndex operator+(ModeIndex a, ModeIndex b) { return {a.p + b.p, a.m + b.m, a.k + b.k}; }

// Norm selector: sobolev(j) uses weight (1+|N|^2)^j, analytic(r) uses weight
// e^{|N| r} on |c_N|^2.
struct NormSpec {
    enum class Kind { Sobolev, Analytic };
    Kind kind = Kind::Sobolev;
    int order = 0;       // j for Sobolev
    double radius = 0.0;  // r for analytic

    static NormSpec sobolev(int j) {
        if (j < 0) throw std::invalid_argument("sobolev order must be >= 0");
        return {Kind::Sobolev, j, 0.0};
    }
    static NormSpec analytic(double r) {
        if (!(r > 0)) throw std::invalid_argument("analytic radius must be > 0");
        return {Kind::Analytic, 0, r};
    }
};

// Input/contract violations (CLI exit code 2).
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: guards tripped, iterations exhausted (CLI exit code 3).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace folitor
