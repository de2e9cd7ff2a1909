#pragma once

#include <functional>
#include <map>
#include <tuple>

#include "folitor/foliation.hpp"
#include "folitor/types.hpp"

namespace folitor {

// Mode key wide enough for convergent indices (|k| up to ~2^30 and their
// small integer combinations).
struct Mode64 {
    long long p = 0;
    long long m = 0;
    long long k = 0;

    friend auto operator<=>(const Mode64&, const Mode64&) = default;
};

inline Mode64 operator+(Mode64 a, Mode64 b) { return {a.p + b.p, a.m + b.m, a.k + b.k}; }

// Sparse Fourier series over arbitrary integer modes, ordered container for
// deterministic iteration.  Used by the counterexample pipeline whose modes
// lie far outside any dense band.
class SparseField {
  public:
    static SparseField constant(Complex value);

    Complex at(Mode64 n) const;
    void add(Mode64 n, Complex value, double drop_below = 0.0);
    std::size_t term_count() const { return c_.size(); }
    const std::map<Mode64, Complex>& terms() const { return c_; }

    Complex average() const { return at(Mode64{}); }
    double h0_norm() const;        // sqrt(sum |c|^2)
    double coefficient_l1() const;  // sum |c|, a sup bound

    SparseField& operator+=(const SparseField& other);
    SparseField& operator-=(const SparseField& other);
    SparseField& operator*=(Complex s);

    // Exact convolution; terms below drop_below are discarded (their mass is
    // added to *dropped when given).
    static SparseField multiply(const SparseField& a, const SparseField& b,
                                double drop_below = 0.0, double* dropped = nullptr);

    SparseField mapped(const std::function<Complex(Mode64)>& symbol) const;

    // 1/f for f = c0 + g with |g/c0| summable below 1: Neumann series in
    // g/c0, truncated once the tail bound falls under tol.
    static SparseField reciprocal(const SparseField& f, double tol = 1e-14,
                                  int max_terms = 64);

  private:
    std::map<Mode64, Complex> c_;
};

// lambda on wide modes, exact when the slopes are exact (the double formula
// cancels catastrophically at convergent modes).
Complex lambda_wide(const FoliationParams& params, Mode64 n);

// || D_zbar f - D_z (nu f) ||_H0 / max(1, ||f||_H0) in the sparse algebra.
double sparse_closedness_residual(const FoliationParams& params, const SparseField& nu,
                                  const SparseField& f);

}  // namespace folitor
