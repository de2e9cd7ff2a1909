#pragma once

#include <array>
#include <string>
#include <vector>

#include "folitor/diophantine.hpp"
#include "folitor/field.hpp"
#include "folitor/foliation.hpp"
#include "folitor/sparse_field.hpp"

namespace folitor {

// omega = f (dz + mu dzbar), z = x1 + i x2.
struct LeafForm {
    FourierField f;
    FourierField mu;
};

struct ClosureSolution {
    FourierField h;
    double residual1 = 0.0;         // || d f / d x3 - D_z h ||_H0
    double residual2 = 0.0;         // || d (mu f) / d x3 - D_zbar h ||_H0
    double max_amplification = 0.0;  // max |k / lambda_N| over driven modes
    std::vector<std::string> warnings;
};

struct BuildOptions {
    double amplification_warn = 1e6;
};

// h = D_z^{-1} (d f / d x3); the closure datum of the closed extension.
ClosureSolution build_h(const FoliationParams& params, const LeafForm& leafform,
                        const BuildOptions& options = {});

struct ClosedFormAssembly {
    // Omega = f dz + (mu f) dzbar - h dl in the (dx1, dx2, dx3) basis.
    FourierField w1, w2, w3;
    double dform_residual = 0.0;  // max H^0 norm of the three curl components
};

ClosedFormAssembly assemble_closed_form(const FoliationParams& params, const LeafForm& leafform,
                                        const ClosureSolution& closure);

struct MetricReport {
    // Gram coefficient fields of Re(Omega x conj Omega) + dl x dl:
    // g11, g12, g13, g22, g23, g33.
    std::array<FourierField, 6> gram;
    int grid_points = 0;
    double min_eigenvalue = 0.0;
    std::array<double, 3> min_location{};
    bool positive_definite = false;
};

// Samples positive definiteness of the Euclidean candidate metric on the
// uniform grid; throws NumericalError at a non-positive sample.
MetricReport euclidean_metric(const FoliationParams& params, const ClosedFormAssembly& omega,
                              int grid_points = 33);

struct FamilyMode {
    ModeIndex mode;
    Complex unit_coeff;  // lambda_N / k, evaluated exactly then rounded
    Complex lambda;
    bool dropped = false;
};

struct CounterexampleFamily {
    double t = 0.0;
    std::vector<FamilyMode> modes;
    // (s, sum |N|^s |coeff|) pairs witnessing smoothness of the family member
    std::vector<std::pair<double, double>> smoothness_certificate;
    double min_abs_lower_bound = 0.0;  // 1 - |t| sum |coeff|
    std::vector<std::string> warnings;

    SparseField field() const;       // 1 + t sum (lambda/k) e^{i(N_j, x)}
    SparseField derivative() const;  // d/dt of the family: sum (lambda/k) e^{i(N_j, x)}
};

// The one-parameter family 1 + t sum_j (lambda_{N_j}/k_j) e^{i(N_j, x)} over
// the supplied small-denominator modes.
CounterexampleFamily counterexample_family(const FoliationParams& params,
                                           const std::vector<LiouvilleMode>& modes, double t);

struct ObstructionReport {
    std::vector<double> forced_magnitudes;  // |h_{N_j}| forced by the first closure equation
    std::vector<double> partial_l2_mass;    // running sum of |h_{N_j}|^2
    double expected_magnitude = 0.0;        // |t|
    double max_deviation = 0.0;
    std::string verdict;                    // "obstructed" / "unobstructed (trivial)" / ...
};

ObstructionReport obstruction_detect(const FoliationParams& params,
                                     const CounterexampleFamily& family);

// Generic variant: forced coefficients read off a dense field at the given
// modes (k != 0 required).
ObstructionReport obstruction_detect(const FoliationParams& params, const FourierField& f,
                                     const std::vector<ModeIndex>& modes, double t);

struct Lemma3Result {
    SparseField nu;
    double sup_l1_bound = 0.0;    // sum |nu coefficients| >= sup|nu|
    double eq_residual = 0.0;     // closedness residual of (nu, f) at the endpoint
    int steps = 0;
};

// Solves d(nu)/dt = (U^{-1} df/dt - nu df/dt) / f with nu(., 0) = 0 along the
// family parameter, in the sparse algebra.
Lemma3Result lemma3_solve_nu(const FoliationParams& params, const CounterexampleFamily& family,
                             int steps = 64);

}  // namespace folitor
