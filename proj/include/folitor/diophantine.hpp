#pragma once

#include <string>
#include <vector>

#include "folitor/foliation.hpp"
#include "folitor/rationals.hpp"

namespace folitor {

enum class DioClass {
    DiophantineEvidence,
    WeaklyDiophantineEvidence,
    LiouvilleEvidence,
    RationalDegenerate,
    Inconclusive,
};

std::string to_string(DioClass c);

struct ScanRecord {
    ModeIndex mode;
    int l1 = 0;
    double d = 0.0;  // |p + k a1| + |m + k a2|
};

struct ClassifyThresholds {
    double eps_weak = 0.05;        // L-hat >= 1 - eps_weak
    double liouville_jump = 2.0;   // a top-half slope beyond this is a jump
    double liouville_ratio = 1.75; // ... and must dominate the median slope
    double dio_max_slope = 2.0;
    double dio_spread = 0.75;
    std::size_t min_records = 4;
};

struct DiophantineReport {
    int cutoff = 0;
    std::vector<ScanRecord> records;       // running minima of d as |N| grows
    std::vector<double> s_grid;
    std::vector<double> product_minima;    // min of d * |N|^s per grid entry
    double envelope_exponent = 0.0;        // s-hat: max consecutive-record slope, top half
    double ols_exponent = 0.0;             // least-squares slope of log d vs log |N|
    double liminf_proxy = 1.0;             // L-hat = min d^{1/|N|}
    bool exact_zero_in_scan = false;
    bool exact_zero_exists = false;
    ModeIndex zero_mode;
    BigInt resonance_denominator = 0;
    DioClass classification = DioClass::Inconclusive;
    std::vector<std::string> notes;
};

// Scans all N != 0 with max|N_i| <= cutoff.  The enumeration is reduced
// analytically: every mode with d < 1/2 has (p, m) = rounded(-k a); the scan
// brute-forces the small-|N| region and walks the rounded candidates per k.
// The full-enumeration reference below validates the reduction in tests.
DiophantineReport scan_denominators(const FoliationParams& params, int cutoff,
                                    std::vector<double> s_grid = {1.0, 2.0, 3.0, 4.0, 6.0});

DioClass classify(DiophantineReport& report, const ClassifyThresholds& thresholds = {});

// Serial reference scan (plain triple loop); for tests and the bench target.
std::vector<ScanRecord> scan_records_reference(const FoliationParams& params, int cutoff);

struct LiouvilleMode {
    ModeIndex mode;
    double s_target = 0.0;
    bool verified = false;   // |lambda|^{-1} > |N|^{s_target} held strictly
    double quality = 0.0;    // log|lambda^{-1}| / log|N|
    Complex lambda;
    bool lambda_exact_known = false;
    Rational lambda_re;      // exact lambda when the slopes are exact
    Rational lambda_im;
};

struct LiouvilleModeReport {
    std::vector<LiouvilleMode> modes;  // sorted by |N|
    std::size_t verified_count = 0;
    std::vector<std::string> warnings;
};

struct LiouvilleModeOptions {
    // Candidate modes must come from convergents with denominators below this
    // (also keeps every component inside 32-bit ModeIndex).
    BigInt max_denominator = BigInt(1) << 30;
    // Significance floor: |lambda|^{-1} must exceed this, filtering the
    // small-|N| artifacts every slope exhibits.
    double quality_floor = 100.0;
};

// Builds the small-denominator mode sequence from continued-fraction
// convergents of the slopes.  Each target s_j gets the smallest-|N| unused
// candidate with |lambda|^{-1} > |N|^{s_j}; when none exists and at least one
// earlier target was met, the best remaining candidate is substituted and
// flagged unverified (warning).  When no target is met at all the list is
// empty.  Exact resonances (lambda = 0) are excluded.
LiouvilleModeReport find_liouville_modes(const FoliationParams& params,
                                         const std::vector<double>& s_targets,
                                         const LiouvilleModeOptions& options = {});

struct DiophantineCheck {
    bool holds = false;
    BigInt worst_m;
    BigInt worst_k;
    double log_margin = 0.0;  // log(|alpha - m/k| * |k|^{s+1} / C) at the worst pair
    std::vector<std::string> notes;
};

// Verifies |alpha - m/k| > C / |k|^{s+1} for all |k| <= K by checking the
// continued-fraction convergents (sufficient: best approximations are
// convergents).  Exact inputs with integer s are decided by exact rational
// comparison; otherwise certified log arithmetic.
DiophantineCheck check_diophantine_number(const Slope& alpha, double C, double s,
                                          const BigInt& K);

}  // namespace folitor
