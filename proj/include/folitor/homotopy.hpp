#pragma once

#include <cstdint>
#include <vector>

#include "folitor/field.hpp"
#include "folitor/foliation.hpp"

namespace folitor {

// A Beltrami coefficient with its validated sup bracket.  Construction fails
// unless the rigorous upper bound is < 1.
struct BeltramiField {
    FourierField mu;
    SupBound sup;

    double delta_hat() const { return sup.upper_bound; }

    static BeltramiField validate(FourierField mu, int oversample = 4);
};

enum class PathRule { Linear, Sine };

struct SolverConfig {
    double step_tol = 1e-9;      // RK error per unit time, in the control norm
    // Closedness residual allowed at accepted steps.  The residual counts the
    // dealiasing spill, which decays with the cutoff but never vanishes, so
    // the default is a sanity gate; tighten it for well-resolved runs.
    double residual_tol = 1e-2;
    double vanish_guard_ratio = 1e-3;  // min|f| guard relative to ||f||_H0
    double resolvent_tol = 1e-12;
    int max_resolvent_iters = 2000;
    PathRule path = PathRule::Linear;
    NormSpec control_norm = NormSpec::sobolev(2);  // analytic(r) in the analytic category
    int oversample = 4;        // final-field grid oversampling
    int guard_oversample = 2;  // per-step vanish-guard grid
    int snapshot_count = 11;
    int max_steps = 20000;
};

struct ResolventStats {
    int iterations = 0;
    double defect = 0.0;  // ||y - g - U(nu y)||_H0 of the returned iterate
};

// Solves (Id - U o nu) y = g by the contraction y <- g + U(P_M(nu y)).
// `delta` must be a sup bound of |nu| strictly below 1.  `warm_start` seeds
// the iteration when given.
FourierField resolvent_apply(const FoliationParams& params, const FourierField& nu,
                             const FourierField& g, double delta, double tol,
                             int max_iters = 2000, ResolventStats* stats = nullptr,
                             const FourierField* warm_start = nullptr);

struct Prop1Probe {
    int order = 0;  // j
    double delta = 0.0;
    double max_grad = 0.0;      // max over axes of a validated sup bound of |d nu / dx_r|
    double estimate = 0.0;      // largest ||y||_j / ||g||_j over the probes
    double bound = 0.0;
    bool within_bound = false;
    std::vector<double> samples;
};

// Empirical resolvent-norm probe against the uniform bound
// C(delta) (1 + max_r sup|d nu/dx_r|^j), C = 1/(1-delta) for j=0 and
// 4/(1-delta)^2 for j=1.
Prop1Probe prop1_probe(const FoliationParams& params, const FourierField& nu, int order,
                       int trials, std::uint64_t seed);

// || D_zbar f - D_z (nu f) ||_H0 / max(1, ||f||_H0), with the product kept on
// the doubled band so dealiasing spill counts toward the residual.
double closedness_residual(const FoliationParams& params, const FourierField& nu,
                           const FourierField& f);

struct StepDiagnostics {
    double t = 0.0;
    double step = 0.0;
    double residual = 0.0;
    double min_abs_f = 0.0;
    double norm_h0 = 0.0;
    double norm_h1 = 0.0;
    double norm_h2 = 0.0;
    int resolvent_iterations = 0;
};

struct HomotopySolution {
    FourierField final_f;
    double final_residual = 0.0;
    double final_min_abs = 0.0;   // on the oversampled grid
    std::vector<double> snapshot_times;
    std::vector<FourierField> snapshots;
    std::vector<StepDiagnostics> steps;
    long long total_resolvent_iterations = 0;
    int accepted_steps = 0;
    int rejected_steps = 0;
};

// Integrates df/dt = (Id - U o nu)^{-1} (U o d(nu)/dt) f from f(.,0) = 1 with
// adaptive step-doubled RK4 under the configured control norm.  nu(.,t)
// follows the configured path rule through mu.
HomotopySolution integrate_homotopy(const FoliationParams& params, const BeltramiField& mu,
                                    const SolverConfig& config = {});

// The 2-torus variant (slopes unused; full closedness on T^2).
HomotopySolution torus2_solve(const BeltramiField& mu, const SolverConfig& config = {});

// min_c ||a - c b|| / ||a||: projective H^0 distance.
double projective_distance(const FourierField& a, const FourierField& b);

}  // namespace folitor
