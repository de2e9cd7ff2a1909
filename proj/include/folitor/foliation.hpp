#pragma once

#include <functional>
#include <optional>

#include "folitor/field.hpp"
#include "folitor/rationals.hpp"
#include "folitor/types.hpp"

namespace folitor {

// Slopes of the linear function l(x) = a1 x1 + a2 x2 - x3 whose level sets
// foliate the 3-torus.
struct FoliationParams {
    Slope a1;
    Slope a2;

    bool is_exact() const { return a1.is_exact() && a2.is_exact(); }
};

// Eigenvalue of D_z on e^{i(N,x)}:  (i/2) * (p + k a1 - i (m + k a2)).
// On the 2-torus the leaf coordinate is global and the slopes drop out:
// lambda = (i/2)(n1 - i n2).
Complex lambda_of(const FoliationParams& params, ModeIndex n, Torus dim = Torus::T3);

// Eigenvalue of D_zbar: -conj(lambda).
Complex lambda_prime_of(const FoliationParams& params, ModeIndex n, Torus dim = Torus::T3);

// Unitary eigenvalue -lambda/conj(lambda); fixed to 1 where lambda vanishes.
Complex u_of(const FoliationParams& params, ModeIndex n, Torus dim = Torus::T3);

// Exact (re, im) of lambda when both slopes are exact rationals.
std::optional<std::pair<Rational, Rational>> lambda_exact(const FoliationParams& params,
                                                          ModeIndex n);

// A diagonal operator in the Fourier basis.
struct MultiplierSymbol {
    enum class Tag { Dz, Dzbar, U, Uinv, Dzinv, Ddx3, Custom };
    Tag tag = Tag::Custom;
    std::function<Complex(ModeIndex)> symbol;
};

MultiplierSymbol dz_symbol(const FoliationParams& params, Torus dim = Torus::T3);
MultiplierSymbol dzbar_symbol(const FoliationParams& params, Torus dim = Torus::T3);
MultiplierSymbol u_symbol(const FoliationParams& params, Torus dim = Torus::T3);
MultiplierSymbol u_inverse_symbol(const FoliationParams& params, Torus dim = Torus::T3);

FourierField apply_symbol(const MultiplierSymbol& sym, const FourierField& a);

FourierField apply_dz(const FoliationParams& params, const FourierField& a);
FourierField apply_dzbar(const FoliationParams& params, const FourierField& a);

enum class UDirection { Forward, Inverse };
FourierField apply_u(const FoliationParams& params, const FourierField& a,
                     UDirection direction = UDirection::Forward);

// c_N / lambda_N on zero-average input.  Rejects nonzero averages and exact
// lambda zeros (non-dense leaves).
FourierField apply_dz_inverse(const FoliationParams& params, const FourierField& a);

struct DensityReport {
    double min_abs_lambda = 0.0;
    ModeIndex argmin;
    bool zero_in_band = false;          // an exact zero inside the scanned band
    bool exact_zero_exists = false;     // symbolic: rational slopes force a zero somewhere
    std::optional<ModeIndex> zero_mode;  // in-band witness when zero_in_band
    BigInt resonance_denominator = 0;    // minimal k > 0 with k*a1, k*a2 integral
    int scanned_cutoff = 0;
};

struct Resonance {
    bool exists = false;
    BigInt denominator = 0;          // minimal k > 0 with k*a1, k*a2 integral
    std::optional<ModeIndex> mode;   // the zero mode, when it fits 32-bit ints
};

// Symbolic resonance of exact rational slopes; O(1), no scanning.
Resonance exact_resonance(const FoliationParams& params);

// Scans 0 < max|N_i| <= cutoff for the smallest |lambda_N|; detects exact
// resonances symbolically when the slopes are exact rationals.  The brute
// scan is cubic in the cutoff; meant for solver-scale cutoffs.
DensityReport density_check(const FoliationParams& params, int cutoff);

// True when no resonance lies inside the band (the solver precondition).
bool leaves_dense_at_cutoff(const FoliationParams& params, int cutoff);

}  // namespace folitor
