#include "folitor/report.hpp"

#include <cmath>
#include <random>

namespace folitor {

Json mode_to_json(ModeIndex n) { return Json::array({n.p, n.m, n.k}); }

Json slope_to_json(const Slope& s) {
    Json j;
    j["value"] = s.value;
    if (s.exact) {
        j["exact_numerator"] = numerator(*s.exact).str();
        j["exact_denominator"] = denominator(*s.exact).str();
    }
    return j;
}

Json params_to_json(const FoliationParams& p) {
    Json j;
    j["a1"] = slope_to_json(p.a1);
    j["a2"] = slope_to_json(p.a2);
    return j;
}

Json diophantine_report_to_json(const DiophantineReport& rep) {
    Json j;
    j["cutoff"] = rep.cutoff;
    Json recs = Json::array();
    for (const ScanRecord& r : rep.records) {
        Json e;
        e["mode"] = mode_to_json(r.mode);
        e["l1"] = r.l1;
        e["d"] = r.d;
        recs.push_back(std::move(e));
    }
    j["records"] = std::move(recs);
    j["s_grid"] = rep.s_grid;
    j["product_minima"] = rep.product_minima;
    j["envelope_exponent"] = rep.envelope_exponent;
    j["ols_exponent"] = rep.ols_exponent;
    j["liminf_proxy"] = rep.liminf_proxy;
    j["exact_zero_in_scan"] = rep.exact_zero_in_scan;
    j["exact_zero_exists"] = rep.exact_zero_exists;
    if (rep.exact_zero_in_scan) j["zero_mode"] = mode_to_json(rep.zero_mode);
    if (rep.resonance_denominator != 0)
        j["resonance_denominator"] = rep.resonance_denominator.str();
    j["classification"] = to_string(rep.classification);
    j["notes"] = rep.notes;
    return j;
}

Json liouville_modes_to_json(const LiouvilleModeReport& rep) {
    Json j;
    Json modes = Json::array();
    for (const LiouvilleMode& m : rep.modes) {
        Json e;
        e["mode"] = mode_to_json(m.mode);
        e["s_target"] = m.s_target;
        e["verified"] = m.verified;
        e["quality"] = m.quality;
        e["lambda"] = Json::array({m.lambda.real(), m.lambda.imag()});
        modes.push_back(std::move(e));
    }
    j["modes"] = std::move(modes);
    j["verified_count"] = rep.verified_count;
    j["warnings"] = rep.warnings;
    return j;
}

Json diophantine_check_to_json(const DiophantineCheck& chk) {
    Json j;
    j["holds"] = chk.holds;
    j["worst_m"] = chk.worst_m.str();
    j["worst_k"] = chk.worst_k.str();
    j["log_margin"] = chk.log_margin;
    j["notes"] = chk.notes;
    return j;
}

Json homotopy_solution_to_json(const HomotopySolution& sol, bool include_snapshots) {
    Json j;
    j["final_field"] = field_to_json(sol.final_f);
    j["final_residual"] = sol.final_residual;
    j["final_min_abs"] = sol.final_min_abs;
    j["accepted_steps"] = sol.accepted_steps;
    j["rejected_steps"] = sol.rejected_steps;
    j["total_resolvent_iterations"] = sol.total_resolvent_iterations;
    Json diag = Json::array();
    for (const StepDiagnostics& d : sol.steps) {
        diag.push_back(Json::array({d.t, d.residual, d.min_abs_f, d.norm_h0, d.norm_h1,
                                    d.norm_h2, d.resolvent_iterations}));
    }
    j["steps"] = std::move(diag);
    j["step_columns"] =
        Json::array({"t", "residual", "min_abs_f", "h0", "h1", "h2", "resolvent_iterations"});
    if (include_snapshots) {
        Json snaps = Json::array();
        for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
            Json s;
            s["t"] = sol.snapshot_times[i];
            s["field"] = field_to_json(sol.snapshots[i]);
            snaps.push_back(std::move(s));
        }
        j["snapshots"] = std::move(snaps);
    }
    return j;
}

Json prop1_to_json(const Prop1Probe& probe) {
    Json j;
    j["order"] = probe.order;
    j["delta"] = probe.delta;
    j["max_grad"] = probe.max_grad;
    j["estimate"] = probe.estimate;
    j["bound"] = probe.bound;
    j["within_bound"] = probe.within_bound;
    return j;
}

Json oracle_to_json(const KernelOracleResult& res) {
    Json j;
    j["sigma1"] = res.sigma1;
    j["sigma2"] = res.sigma2;
    j["ambiguous"] = res.ambiguous;
    j["average_normalized"] = res.average_normalized;
    j["field"] = field_to_json(res.field);
    return j;
}

Json closure_to_json(const ClosureSolution& cs) {
    Json j;
    j["h"] = field_to_json(cs.h);
    j["residual1"] = cs.residual1;
    j["residual2"] = cs.residual2;
    j["max_amplification"] = cs.max_amplification;
    j["warnings"] = cs.warnings;
    return j;
}

Json assembly_to_json(const ClosedFormAssembly& as, bool include_fields) {
    Json j;
    j["dform_residual"] = as.dform_residual;
    if (include_fields) {
        j["dx1"] = field_to_json(as.w1);
        j["dx2"] = field_to_json(as.w2);
        j["dx3"] = field_to_json(as.w3);
    }
    return j;
}

Json metric_report_to_json(const MetricReport& rep) {
    Json j;
    j["grid_points"] = rep.grid_points;
    j["min_eigenvalue"] = rep.min_eigenvalue;
    j["min_location"] = Json::array(
        {rep.min_location[0], rep.min_location[1], rep.min_location[2]});
    j["positive_definite"] = rep.positive_definite;
    return j;
}

Json family_to_json(const CounterexampleFamily& fam) {
    Json j;
    j["t"] = fam.t;
    Json modes = Json::array();
    for (const FamilyMode& fm : fam.modes) {
        Json e;
        e["mode"] = mode_to_json(fm.mode);
        e["coefficient"] = Json::array({fam.t * fm.unit_coeff.real(),
                                        fam.t * fm.unit_coeff.imag()});
        e["dropped"] = fm.dropped;
        modes.push_back(std::move(e));
    }
    j["modes"] = std::move(modes);
    Json cert = Json::array();
    for (const auto& [s, v] : fam.smoothness_certificate)
        cert.push_back(Json::array({s, v}));
    j["smoothness_certificate"] = std::move(cert);
    j["min_abs_lower_bound"] = fam.min_abs_lower_bound;
    j["warnings"] = fam.warnings;
    return j;
}

Json obstruction_to_json(const ObstructionReport& rep) {
    Json j;
    j["forced_magnitudes"] = rep.forced_magnitudes;
    j["partial_l2_mass"] = rep.partial_l2_mass;
    j["expected_magnitude"] = rep.expected_magnitude;
    j["max_deviation"] = rep.max_deviation;
    j["verdict"] = rep.verdict;
    return j;
}

Json lemma3_to_json(const Lemma3Result& res) {
    Json j;
    j["sup_l1_bound"] = res.sup_l1_bound;
    j["closedness_residual"] = res.eq_residual;
    j["steps"] = res.steps;
    j["term_count"] = res.nu.term_count();
    return j;
}

Json chart_summary_to_json(const ChartSample& cs) {
    Json j;
    j["grid"] = cs.grid;
    j["radius"] = cs.radius;
    j["max_dilatation"] = cs.max_dilatation;
    j["min_jacobian"] = cs.min_jacobian;
    j["derivative_error"] = cs.derivative_error;
    return j;
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
    const std::uint64_t bits = rng() >> 11;
    return 2.0 * (static_cast<double>(bits) * 0x1.0p-53) - 1.0;
}

FourierField random_field(Torus dim, int cutoff, std::mt19937_64& rng, double scale = 1.0) {
    FourierField f(dim, cutoff);
    for (auto& c : f.coefficients()) c = Complex{uniform_pm1(rng), uniform_pm1(rng)} * scale;
    return f;
}

// Smooth random Beltrami coefficient rescaled to the target sup bound.
FourierField random_beltrami(Torus dim, int cutoff, std::mt19937_64& rng, double target) {
    FourierField f(dim, cutoff);
    const double base = 0.25 + 0.5 * std::abs(uniform_pm1(rng));
    f.set(ModeIndex{}, Complex{base * uniform_pm1(rng), base * uniform_pm1(rng)});
    const int reach = std::min(1, cutoff);
    for (int p = -reach; p <= reach; ++p)
        for (int m = -reach; m <= reach; ++m) {
            const int krange = dim == Torus::T3 ? reach : 0;
            for (int k = -krange; k <= krange; ++k) {
                const ModeIndex n{p, m, k};
                if (n == ModeIndex{}) continue;
                f.set(n, Complex{uniform_pm1(rng), uniform_pm1(rng)} * 0.12);
            }
        }
    const double sup = validated_sup_bound(f, 4).upper_bound;
    f *= Complex{target / sup, 0.0};
    return f;
}

struct CheckLog {
    Json checks = Json::array();
    bool all = true;

    void add(const std::string& name, bool pass, double err, Json extra = Json::object()) {
        Json e;
        e["name"] = name;
        e["pass"] = pass;
        e["max_error"] = err;
        for (auto& [k, v] : extra.items()) e[k] = v;
        checks.push_back(std::move(e));
        all = all && pass;
    }
};

}  // namespace

VerifyOutcome run_verify_battery(const VerifyOptions& opt) {
    CheckLog log;
    const int m = opt.cutoff;
    std::mt19937_64 rng(opt.seed);
    const FoliationParams params{Slope::from_double(std::sqrt(2.0)),
                                 Slope::from_double(std::sqrt(3.0))};

    {  // Parseval polarization on random fields
        double err = 0.0;
        for (int t = 0; t < 20; ++t) {
            FourierField a = random_field(Torus::T3, m, rng);
            FourierField b = random_field(Torus::T3, m, rng);
            const double na = norm(a, NormSpec::sobolev(0));
            const double nb = norm(b, NormSpec::sobolev(0));
            FourierField sum = a;
            sum += b;
            const double ns = norm(sum, NormSpec::sobolev(0));
            const double lhs = na * na + nb * nb + 2.0 * inner_product(a, b).real();
            err = std::max(err, std::abs(lhs - ns * ns) / std::max(1.0, ns * ns));
        }
        log.add("parseval", err <= 1e-12, err);
    }

    {  // unitarity of U in H^0, H^1, H^2
        double err = 0.0;
        for (int t = 0; t < 100; ++t) {
            FourierField a = random_field(Torus::T3, m, rng);
            FourierField ua = apply_u(params, a);
            for (int j = 0; j <= 2; ++j) {
                const double na = norm(a, NormSpec::sobolev(j));
                const double nu = norm(ua, NormSpec::sobolev(j));
                err = std::max(err, std::abs(na - nu) / std::max(1.0, na));
            }
        }
        log.add("u_unitarity", err <= 1e-11, err);
    }

    {  // the unitary intertwines the leafwise derivative pair
        MultiplierSymbol u = u_symbol(params);
        if (opt.corrupt_u) {
            auto base = u.symbol;
            u.symbol = [base](ModeIndex n) {
                if (n == ModeIndex{1, 1, 0}) return -base(n);
                return base(n);
            };
        }
        double err = 0.0;
        for (int t = 0; t < 20; ++t) {
            FourierField a = random_field(Torus::T3, m, rng);
            FourierField lhs1 = apply_symbol(u, apply_dzbar(params, a));
            FourierField lhs2 = apply_dzbar(params, apply_symbol(u, a));
            FourierField rhs = apply_dz(params, a);
            FourierField d1 = lhs1; d1 -= rhs;
            FourierField d2 = lhs2; d2 -= rhs;
            err = std::max({err, norm(d1, NormSpec::sobolev(0)), norm(d2, NormSpec::sobolev(0))});
        }
        log.add("u_intertwines_leaf_derivatives", err <= 1e-11, err);
    }

    {  // U commutes with the coordinate derivatives
        double err = 0.0;
        for (int axis = 1; axis <= 3; ++axis) {
            FourierField a = random_field(Torus::T3, m, rng);
            FourierField lhs = apply_u(params, partial_derivative(a, axis));
            FourierField rhs = partial_derivative(apply_u(params, a), axis);
            lhs -= rhs;
            err = std::max(err, norm(lhs, NormSpec::sobolev(0)));
        }
        log.add("u_commutes_derivatives", err <= 1e-11, err);
    }

    {  // eigenvalue symmetries
        double err = 0.0;
        std::mt19937_64 mrng(opt.seed ^ 0x9e3779b97f4a7c15ull);
        for (int t = 0; t < 1000; ++t) {
            const ModeIndex n{static_cast<int>(mrng() % 41) - 20,
                              static_cast<int>(mrng() % 41) - 20,
                              static_cast<int>(mrng() % 41) - 20};
            const Complex lam = lambda_of(params, n);
            const Complex lamm = lambda_of(params, -n);
            err = std::max(err, std::abs(lamm + lam));  // lambda is linear in N
            err = std::max(err, std::abs(lambda_prime_of(params, n) + std::conj(lam)));
            err = std::max(err,
                           std::abs(std::abs(lam) - std::abs(lambda_prime_of(params, n))));
        }
        log.add("eigenvalue_symmetries", err <= 1e-12, err);
    }

    {  // resolvent norm probes
        bool ok = true;
        double worst = 0.0;
        for (int j = 0; j <= 1; ++j) {
            FourierField nu = random_beltrami(Torus::T3, m, rng, 0.5);
            Prop1Probe probe = prop1_probe(params, nu, j, 10, opt.seed + j);
            ok = ok && probe.within_bound;
            worst = std::max(worst, probe.estimate / probe.bound);
        }
        log.add("resolvent_norm_probes", ok, worst);
    }

    {  // constant-coefficient closed forms on both tori
        double err = 0.0;
        for (Torus dim : {Torus::T3, Torus::T2}) {
            const Complex c{0.4, 0.2};
            BeltramiField mu = BeltramiField::validate(
                FourierField::constant(dim, m, c));
            SolverConfig cfg;
            cfg.snapshot_count = 2;
            HomotopySolution sol = dim == Torus::T3 ? integrate_homotopy(params, mu, cfg)
                                                    : torus2_solve(mu, cfg);
            const Complex expect = Complex{1.0, 0.0} / (Complex{1.0, 0.0} - c);
            FourierField diff = sol.final_f;
            diff -= FourierField::constant(dim, m, expect);
            err = std::max(err, norm(diff, NormSpec::sobolev(0)) / std::abs(expect));
        }
        log.add("constant_beltrami_closed_form", err <= 1e-8, err);
    }

    {  // two independent routes to the closed-form factor
        FourierField mu_f = random_beltrami(Torus::T3, m, rng, 0.35);
        BeltramiField mu = BeltramiField::validate(mu_f);
        SolverConfig cfg;
        cfg.snapshot_count = 2;
        HomotopySolution sol = integrate_homotopy(params, mu, cfg);
        KernelOracleResult oracle = kernel_oracle(params, mu_f, m);
        const double dist = projective_distance(sol.final_f, oracle.field);
        const bool pass = dist <= 1e-6 && sol.final_residual <= 1e-6 && !oracle.ambiguous;
        Json extra;
        extra["final_residual"] = sol.final_residual;
        extra["sigma1"] = oracle.sigma1;
        extra["sigma2"] = oracle.sigma2;
        log.add("oracle_cross_validation", pass, dist, extra);
    }

    {  // obstruction duality of the small-denominator family
        const FoliationParams liou{Slope::from_rational(liouville_constant(5)),
                                   Slope::from_rational(Rational(0))};
        LiouvilleModeReport lm = find_liouville_modes(liou, {2.0, 4.0, 6.0});
        bool ok = lm.modes.size() == 3;
        double dev = 0.0;
        if (ok) {
            CounterexampleFamily fam0 = counterexample_family(liou, lm.modes, 0.0);
            CounterexampleFamily fam1 = counterexample_family(liou, lm.modes, 0.1);
            ObstructionReport r0 = obstruction_detect(liou, fam0);
            ObstructionReport r1 = obstruction_detect(liou, fam1);
            dev = r1.max_deviation;
            ok = r0.verdict == "unobstructed (trivial)" && r1.verdict == "obstructed" &&
                 dev <= 1e-10;
        }
        log.add("obstruction_duality", ok, dev);
    }

    VerifyOutcome out;
    out.all_passed = log.all;
    out.checks = std::move(log.checks);
    return out;
}

}  // namespace folitor
