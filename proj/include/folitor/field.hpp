#pragma once

#include <vector>

#include "folitor/types.hpp"

namespace folitor {

// Truncated Fourier series of a complex-valued function on T^3 (or T^2),
// stored densely on the box max|N_i| <= cutoff in lexicographic (p, m, k)
// order.  Modes outside the box are zero.  Fields are immutable values in
// practice: every operation returns a new field.
class FourierField {
  public:
    FourierField() = default;
    FourierField(Torus dim, int cutoff);

    static FourierField constant(Torus dim, int cutoff, Complex value);
    // Single exponential e^{i(N,x)} with the given amplitude.
    static FourierField mode(Torus dim, int cutoff, ModeIndex n, Complex amplitude);

    Torus dim() const { return dim_; }
    int cutoff() const { return cutoff_; }
    int side() const { return 2 * cutoff_ + 1; }
    std::size_t size() const { return coeff_.size(); }

    bool in_band(ModeIndex n) const;
    Complex at(ModeIndex n) const;  // zero outside the band
    void set(ModeIndex n, Complex value);

    std::size_t index_of(ModeIndex n) const;
    ModeIndex mode_at(std::size_t idx) const;

    const std::vector<Complex>& coefficients() const { return coeff_; }
    std::vector<Complex>& coefficients() { return coeff_; }

    // Same modes, new cutoff: extends with zeros or truncates.
    FourierField with_cutoff(int new_cutoff) const;

    // Coefficients of the complex conjugate field: conj(c(-N)).
    FourierField conjugated() const;

    FourierField& operator+=(const FourierField& other);
    FourierField& operator-=(const FourierField& other);
    FourierField& operator*=(Complex s);
    friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
    friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
    friend FourierField operator*(Complex s, FourierField a) { return a *= s; }

  private:
    Torus dim_ = Torus::T3;
    int cutoff_ = 0;
    std::vector<Complex> coeff_;
};

// Pointwise product, dealiased: the convolution is computed exactly on the
// doubled band max|N_i| <= 2*cutoff, then truncated back.  `spill`, when
// given, receives the H^0 mass of the dropped out-of-band modes.
FourierField multiply(const FourierField& a, const FourierField& b, double* spill = nullptr);

// Exact product on the doubled band (no truncation).
FourierField multiply_full(const FourierField& a, const FourierField& b);

// d/dx_axis, axis in {1, 2, 3} (T^2: {1, 2}): mode N scaled by i*N_axis.
FourierField partial_derivative(const FourierField& a, int axis);

// Coefficient at N = 0 (the mean for the normalized Haar measure).
Complex average(const FourierField& a);

double norm(const FourierField& a, NormSpec spec);
Complex inner_product(const FourierField& a, const FourierField& b);  // <a, b> in H^0

// Sum of the coefficient moduli; a rigorous upper bound for sup|a|.
double coefficient_l1(const FourierField& a);

// Value at a point (angles in radians), summed in lexicographic mode order.
Complex evaluate(const FourierField& a, const double* x);

struct GridExtrema {
    double max_modulus = 0.0;
    double min_modulus = 0.0;
    std::vector<double> argmax;
    std::vector<double> argmin;
};

// Modulus extrema over the uniform grid with `points_per_axis` points per
// axis.  The max is a lower bound for the true sup.
GridExtrema grid_extrema(const FourierField& a, int points_per_axis);

// max |a(x)| over the uniform grid with oversample*(2M+1) points per axis.
double sup_estimate(const FourierField& a, int oversample);

struct SupBound {
    double grid_max = 0.0;    // lower bound of the sup
    double upper_bound = 0.0;  // rigorous upper bound of the sup
};

// Two-sided sup bracket: grid maximum of |a| plus a second-derivative
// correction term that dominates the off-grid overshoot of |a|^2.
SupBound validated_sup_bound(const FourierField& a, int oversample);

// Values on the uniform tensor grid (points_per_axis per axis), fastest axis
// last, via the separable synthesis kernel.
std::vector<Complex> synthesize(const FourierField& a, int points_per_axis);

// Inverse of synthesize: exact for band <= (points_per_axis - 1) / 2.
FourierField analyze(Torus dim, const std::vector<Complex>& values, int points_per_axis,
                     int band);

}  // namespace folitor
