#include "folitor/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace folitor {

BeltramiField BeltramiField::validate(FourierField mu, int oversample) {
    if (oversample < 4) throw ValidationError("Beltrami validation needs oversample >= 4");
    const SupBound sb = validated_sup_bound(mu, oversample);
    if (!(sb.upper_bound < 1.0)) {
        std::ostringstream msg;
        msg << "Beltrami bound violated: validated sup " << sb.upper_bound << " >= 1";
        throw ValidationError(msg.str());
    }
    return BeltramiField{std::move(mu), sb};
}

FourierField resolvent_apply(const FoliationParams& params, const FourierField& nu,
                             const FourierField& g, double delta, double tol,
                             int max_iters, ResolventStats* stats,
                             const FourierField* warm_start) {
    if (!(delta < 1.0)) throw ValidationError("resolvent needs sup|nu| < 1");
    if (nu.dim() != g.dim() || nu.cutoff() != g.cutoff())
        throw ValidationError("resolvent operands mismatch");

    const double gnorm = norm(g, NormSpec::sobolev(0));
    FourierField y = warm_start ? *warm_start : g;
    if (warm_start && (y.dim() != g.dim() || y.cutoff() != g.cutoff())) y = g;

    // Contraction: step difference shrinks by delta, so delta*||dy|| bounds
    // the defect of the new iterate.
    const double target = tol * std::max(gnorm, 1e-300);
    int it = 0;
    double defect = std::numeric_limits<double>::infinity();
    while (it < max_iters) {
        FourierField uy = apply_u(params, multiply(nu, y));
        FourierField next = g;
        next += uy;
        FourierField diff = next;
        diff -= y;
        const double dn = norm(diff, NormSpec::sobolev(0));
        y = std::move(next);
        ++it;
        defect = delta * dn;
        if (defect <= target) break;
    }
    if (defect > target) {
        std::ostringstream msg;
        msg << "resolvent did not converge in " << max_iters
            << " iterations; defect bound " << defect << " target " << target;
        throw NumericalError(msg.str());
    }
    if (stats) {
        stats->iterations = it;
        FourierField check = apply_u(params, multiply(nu, y));
        check += g;
        check -= y;
        stats->defect = norm(check, NormSpec::sobolev(0));
    }
    return y;
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
    // 53 mantissa bits, deterministic across standard libraries
    const std::uint64_t bits = rng() >> 11;
    return 2.0 * (static_cast<double>(bits) * 0x1.0p-53) - 1.0;
}

FourierField random_field(Torus dim, int cutoff, std::mt19937_64& rng) {
    FourierField f(dim, cutoff);
    for (auto& c : f.coefficients()) c = {uniform_pm1(rng), uniform_pm1(rng)};
    return f;
}

}  // namespace

Prop1Probe prop1_probe(const FoliationParams& params, const FourierField& nu, int order,
                       int trials, std::uint64_t seed) {
    if (order != 0 && order != 1) throw ValidationError("prop1 probe supports j in {0, 1}");
    Prop1Probe out;
    out.order = order;

    const SupBound sb = validated_sup_bound(nu, 4);
    out.delta = sb.upper_bound;
    if (!(out.delta < 1.0)) throw ValidationError("prop1 probe needs sup|nu| < 1");

    double max_grad = 0.0;
    for (int axis = 1; axis <= axes_of(nu.dim()); ++axis)
        max_grad = std::max(max_grad,
                            validated_sup_bound(partial_derivative(nu, axis), 4).upper_bound);
    out.max_grad = max_grad;

    const double c = order == 0 ? 1.0 / (1.0 - out.delta)
                                : 4.0 / ((1.0 - out.delta) * (1.0 - out.delta));
    const double grad_factor = order == 0 ? 1.0 : max_grad;  // sup|d nu|^j with j = order
    out.bound = c * (1.0 + grad_factor);

    const NormSpec spec = NormSpec::sobolev(order);
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        FourierField g = random_field(nu.dim(), nu.cutoff(), rng);
        const double gn = norm(g, spec);
        if (gn == 0.0) continue;
        FourierField y = resolvent_apply(params, nu, g, out.delta, 1e-12, 4000);
        const double ratio = norm(y, spec) / gn;
        out.samples.push_back(ratio);
        out.estimate = std::max(out.estimate, ratio);
    }
    out.within_bound = out.estimate <= out.bound;
    return out;
}

double closedness_residual(const FoliationParams& params, const FourierField& nu,
                           const FourierField& f) {
    if (nu.dim() != f.dim() || nu.cutoff() != f.cutoff())
        throw ValidationError("closedness operands mismatch");
    const FourierField lhs = apply_dzbar(params, f.with_cutoff(2 * f.cutoff()));
    const FourierField rhs = apply_dz(params, multiply_full(nu, f));
    FourierField r = lhs;
    r -= rhs;
    return norm(r, NormSpec::sobolev(0)) / std::max(1.0, norm(f, NormSpec::sobolev(0)));
}

namespace {

struct PathEval {
    double factor = 0.0;
    double rate = 0.0;
};

PathEval path_at(PathRule rule, double t) {
    if (rule == PathRule::Linear) return {t, 1.0};
    constexpr double half_pi = std::numbers::pi / 2.0;
    return {std::sin(half_pi * t), half_pi * std::cos(half_pi * t)};
}

class HomotopyEngine {
  public:
    HomotopyEngine(const FoliationParams& params, const BeltramiField& mu,
                   const SolverConfig& config)
        : params_(params), mu_(mu), config_(config) {}

    FourierField rhs(double t, const FourierField& f, int* iters) {
        const PathEval pe = path_at(config_.path, t);
        FourierField nu = mu_.mu;
        nu *= Complex{pe.factor, 0.0};
        FourierField driven = multiply(mu_.mu, f);
        driven *= Complex{pe.rate, 0.0};
        FourierField g = apply_u(params_, driven);
        ResolventStats st;
        FourierField y = resolvent_apply(params_, nu, g, mu_.delta_hat() * pe.factor,
                                         config_.resolvent_tol, config_.max_resolvent_iters,
                                         &st, warm_.size() ? &warm_ : nullptr);
        warm_ = y;
        if (iters) *iters += st.iterations;
        return y;
    }

    FourierField rk4(double t, const FourierField& f, double h, int* iters) {
        FourierField k1 = rhs(t, f, iters);
        FourierField s2 = k1; s2 *= Complex{h / 2.0, 0.0}; s2 += f;
        FourierField k2 = rhs(t + h / 2.0, s2, iters);
        FourierField s3 = k2; s3 *= Complex{h / 2.0, 0.0}; s3 += f;
        FourierField k3 = rhs(t + h / 2.0, s3, iters);
        FourierField s4 = k3; s4 *= Complex{h, 0.0}; s4 += f;
        FourierField k4 = rhs(t + h, s4, iters);
        FourierField sum = k1;
        k2 *= Complex{2.0, 0.0}; sum += k2;
        k3 *= Complex{2.0, 0.0}; sum += k3;
        sum += k4;
        sum *= Complex{h / 6.0, 0.0};
        sum += f;
        return sum;
    }

  private:
    const FoliationParams& params_;
    const BeltramiField& mu_;
    const SolverConfig& config_;
    FourierField warm_;
};

}  // namespace

HomotopySolution integrate_homotopy(const FoliationParams& params, const BeltramiField& mu,
                                    const SolverConfig& config) {
    if (!(mu.delta_hat() < 1.0)) throw ValidationError("Beltrami bound violated");
    if (mu.mu.dim() == Torus::T3 && !leaves_dense_at_cutoff(params, mu.mu.cutoff()))
        throw ValidationError("leaves not dense at this cutoff");

    HomotopySolution sol;
    HomotopyEngine engine(params, mu, config);
    FourierField f = FourierField::constant(mu.mu.dim(), mu.mu.cutoff(), {1.0, 0.0});

    const int snaps = std::max(2, config.snapshot_count);
    std::size_t next_snap = 0;
    auto snap_target = [&](std::size_t i) {
        return static_cast<double>(i) / static_cast<double>(snaps - 1);
    };
    auto record_snapshot = [&](double t, const FourierField& field) {
        while (next_snap < static_cast<std::size_t>(snaps) && t >= snap_target(next_snap) - 1e-12) {
            sol.snapshot_times.push_back(t);
            sol.snapshots.push_back(field);
            ++next_snap;
        }
    };

    auto diagnostics_at = [&](double t, double h, const FourierField& field, int iters) {
        StepDiagnostics d;
        d.t = t;
        d.step = h;
        const PathEval pe = path_at(config.path, t);
        FourierField nu = mu.mu;
        nu *= Complex{pe.factor, 0.0};
        d.residual = closedness_residual(params, nu, field);
        d.min_abs_f = grid_extrema(field, config.guard_oversample * field.side()).min_modulus;
        d.norm_h0 = norm(field, NormSpec::sobolev(0));
        d.norm_h1 = norm(field, NormSpec::sobolev(1));
        d.norm_h2 = norm(field, NormSpec::sobolev(2));
        d.resolvent_iterations = iters;
        return d;
    };

    record_snapshot(0.0, f);
    sol.steps.push_back(diagnostics_at(0.0, 0.0, f, 0));

    double t = 0.0;
    double h = 0.05;
    const double hmin = 1e-9;
    int residual_retries = 0;
    while (t < 1.0 - 1e-14) {
        if (sol.accepted_steps + sol.rejected_steps > config.max_steps)
            throw NumericalError("homotopy integration exceeded the step budget");
        h = std::min(h, 1.0 - t);
        int iters = 0;
        const FourierField full = engine.rk4(t, f, h, &iters);
        FourierField half = engine.rk4(t, f, h / 2.0, &iters);
        half = engine.rk4(t + h / 2.0, half, h / 2.0, &iters);
        FourierField diff = half;
        diff -= full;
        const double err = norm(diff, config.control_norm) / 15.0;
        const double tol_step = config.step_tol * h;

        if (err > tol_step && h > hmin) {
            ++sol.rejected_steps;
            h = std::max(hmin, h * std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.2, 0.9));
            continue;
        }

        const double t_new = t + h;
        StepDiagnostics d = diagnostics_at(t_new, h, half, iters);

        if (d.residual > config.residual_tol) {
            if (++residual_retries <= 6 && h > hmin) {
                ++sol.rejected_steps;
                h = std::max(hmin, h / 2.0);
                continue;
            }
            std::ostringstream msg;
            msg << "closedness residual " << d.residual << " above tolerance "
                << config.residual_tol << " at t = " << t_new;
            throw NumericalError(msg.str());
        }
        residual_retries = 0;

        const double guard = config.vanish_guard_ratio * d.norm_h0;
        if (d.min_abs_f < guard) {
            const GridExtrema ex = grid_extrema(half, config.guard_oversample * half.side());
            std::ostringstream msg;
            msg << "possible zero of f: min|f| = " << ex.min_modulus << " at t = " << t_new
                << ", x = (";
            for (std::size_t i = 0; i < ex.argmin.size(); ++i)
                msg << (i ? ", " : "") << ex.argmin[i];
            msg << ")";
            throw NumericalError(msg.str());
        }

        f = std::move(half);
        t = t_new > 1.0 - 1e-12 ? 1.0 : t_new;
        ++sol.accepted_steps;
        sol.total_resolvent_iterations += iters;
        sol.steps.push_back(d);
        record_snapshot(t, f);
        if (err > 0.0)
            h = std::min(1.0, h * std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.2, 2.0));
        else
            h = std::min(1.0, h * 2.0);
    }

    sol.final_f = f;
    const PathEval pe = path_at(config.path, 1.0);
    FourierField nu_final = mu.mu;
    nu_final *= Complex{pe.factor, 0.0};
    sol.final_residual = closedness_residual(params, nu_final, f);
    sol.final_min_abs = grid_extrema(f, config.oversample * f.side()).min_modulus;
    return sol;
}

HomotopySolution torus2_solve(const BeltramiField& mu, const SolverConfig& config) {
    if (mu.mu.dim() != Torus::T2) throw ValidationError("torus2_solve expects a T^2 field");
    const FoliationParams unused{Slope::from_double(0.0), Slope::from_double(0.0)};
    return integrate_homotopy(unused, mu, config);
}

double projective_distance(const FourierField& a, const FourierField& b) {
    const double an = norm(a, NormSpec::sobolev(0));
    const double bn = norm(b, NormSpec::sobolev(0));
    if (an == 0.0) return 0.0;
    if (bn == 0.0) return 1.0;
    const Complex ab = inner_product(a, b);
    const double cross = std::norm(ab) / (bn * bn);
    return std::sqrt(std::max(0.0, an * an - cross)) / an;
}

}  // namespace folitor
