#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "folitor/report.hpp"

namespace {

using namespace folitor;

struct CommonOpts {
    std::string slope_a1 = "sqrt2";
    std::string slope_a2 = "sqrt3";
    int cutoff = 6;
    std::uint64_t seed = 7;
    std::string out;
    double residual_tol = 1e-2;
    double vanish_guard = 1e-3;
    double resolvent_tol = 1e-12;
    std::string category = "smooth";
    double radius = 0.5;  // analytic-category norm radius
    std::string dimension = "torus3";
    std::string path_rule = "linear";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_solver) {
    cmd->add_option("--slope-a1", o.slope_a1, "first slope (number, p/q, or named constant)");
    cmd->add_option("--slope-a2", o.slope_a2, "second slope");
    cmd->add_option("--cutoff", o.cutoff, "mode cutoff M");
    cmd->add_option("--seed", o.seed, "seed for randomized probes");
    cmd->add_option("--out", o.out, "write the report JSON here");
    if (with_solver) {
        cmd->add_option("--residual-tol", o.residual_tol, "closedness residual tolerance");
        cmd->add_option("--vanish-guard", o.vanish_guard, "min|f| guard ratio");
        cmd->add_option("--resolvent-tol", o.resolvent_tol, "resolvent fixed-point tolerance");
        cmd->add_option("--category", o.category, "smooth | analytic");
        cmd->add_option("--radius", o.radius, "analytic norm radius r");
        cmd->add_option("--dimension", o.dimension, "torus3 | torus2");
        cmd->add_option("--path", o.path_rule, "homotopy path: linear | sine");
    }
}

FoliationParams params_of(const CommonOpts& o) {
    return {parse_slope(o.slope_a1), parse_slope(o.slope_a2)};
}

SolverConfig solver_config(const CommonOpts& o) {
    if (o.cutoff < 2) throw ValidationError("cutoff must be >= 2");
    if (!(o.residual_tol > 0) || !(o.vanish_guard > 0) || !(o.resolvent_tol > 0))
        throw ValidationError("tolerances must be positive");
    SolverConfig cfg;
    cfg.residual_tol = o.residual_tol;
    cfg.vanish_guard_ratio = o.vanish_guard;
    cfg.resolvent_tol = o.resolvent_tol;
    if (o.category == "analytic")
        cfg.control_norm = NormSpec::analytic(o.radius);
    else if (o.category != "smooth")
        throw ValidationError("category must be smooth or analytic");
    if (o.path_rule == "sine")
        cfg.path = PathRule::Sine;
    else if (o.path_rule != "linear")
        throw ValidationError("path must be linear or sine");
    return cfg;
}

Json config_echo(const CommonOpts& o) {
    Json j;
    j["slope_a1"] = o.slope_a1;
    j["slope_a2"] = o.slope_a2;
    j["cutoff"] = o.cutoff;
    j["seed"] = o.seed;
    j["residual_tol"] = o.residual_tol;
    j["vanish_guard"] = o.vanish_guard;
    j["resolvent_tol"] = o.resolvent_tol;
    j["category"] = o.category;
    j["radius"] = o.radius;
    j["dimension"] = o.dimension;
    j["path"] = o.path_rule;
    return j;
}

class ReportWriter {
  public:
    ReportWriter(const std::string& command, const CommonOpts& opts)
        : path_(opts.out), start_(std::chrono::steady_clock::now()) {
        doc_["schema"] = kSchemaTag;
        doc_["command"] = command;
        doc_["config"] = config_echo(opts);
    }

    Json& doc() { return doc_; }

    void finish(int exit_code) {
        const auto elapsed = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - start_).count();
        doc_["exit_code"] = exit_code;
        doc_["timing"] = Json{{"seconds", elapsed}};
        if (!path_.empty())
            save_json_file(path_, doc_);
        else
            std::cout << doc_.dump(2) << "\n";
    }

  private:
    std::string path_;
    Json doc_;
    std::chrono::steady_clock::time_point start_;
};


// Runs the command body, writing the (possibly partial) report on failure.
template <typename Fn>
int guarded(ReportWriter& report, Fn&& body) {
    try {
        body();
        report.finish(0);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        report.doc()["error"] = e.what();
        report.finish(2);
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        report.doc()["error"] = e.what();
        report.finish(3);
        return 3;
    }
}

FourierField load_field(const std::string& path, const std::string& dimension, int cutoff) {
    FourierField f = field_from_json(load_json_file(path));
    const Torus want = dimension == "torus2" ? Torus::T2 : Torus::T3;
    if (f.dim() != want) throw ValidationError("input field dimension mismatch");
    if (f.cutoff() != cutoff) f = f.with_cutoff(cutoff);
    return f;
}

int run_analyze(const CommonOpts& o, const std::string& csv_path) {
    ReportWriter report("analyze", o);
    return guarded(report, [&] {
        FoliationParams params = params_of(o);
        DiophantineReport rep = scan_denominators(params, o.cutoff);
        report.doc()["params"] = params_to_json(params);
        report.doc()["analysis"] = diophantine_report_to_json(rep);
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            if (!csv) throw ValidationError("cannot write " + csv_path);
            csv << "p,m,k,absN,d\n";
            for (const ScanRecord& r : rep.records)
                csv << r.mode.p << "," << r.mode.m << "," << r.mode.k << "," << r.l1 << ","
                    << std::scientific << r.d << "\n";
        }
    });
}

int run_solve(const CommonOpts& o, const std::string& in_field) {
    ReportWriter report("solve", o);
    return guarded(report, [&] {
        SolverConfig cfg = solver_config(o);
        FoliationParams params = params_of(o);
        if (in_field.empty()) throw ValidationError("solve needs --in-field with the mu field");
        FourierField mu_f = load_field(in_field, o.dimension, o.cutoff);
        BeltramiField mu = BeltramiField::validate(std::move(mu_f));
        HomotopySolution sol = o.dimension == "torus2" ? torus2_solve(mu, cfg)
                                                       : integrate_homotopy(params, mu, cfg);
        report.doc()["params"] = params_to_json(params);
        report.doc()["beltrami_sup"] =
            Json{{"grid_max", mu.sup.grid_max}, {"upper_bound", mu.sup.upper_bound}};
        report.doc()["solution"] = homotopy_solution_to_json(sol, true);
    });
}

int run_metric(const CommonOpts& o, const std::string& in_field, int sample_grid) {
    ReportWriter report("metric", o);
    return guarded(report, [&] {
        SolverConfig cfg = solver_config(o);
        if (o.dimension != "torus3") throw ValidationError("the metric pipeline lives on torus3");
        FoliationParams params = params_of(o);
        if (in_field.empty()) throw ValidationError("metric needs --in-field with the mu field");
        FourierField mu_f = load_field(in_field, o.dimension, o.cutoff);
        BeltramiField mu = BeltramiField::validate(mu_f);
        HomotopySolution sol = integrate_homotopy(params, mu, cfg);
        report.doc()["params"] = params_to_json(params);
        report.doc()["solution"] = homotopy_solution_to_json(sol, false);

        const LeafForm leafform{sol.final_f, mu_f};
        ClosureSolution closure = build_h(params, leafform);
        DiophantineReport scan = scan_denominators(params, 2000);
        if (scan.classification != DioClass::DiophantineEvidence)
            closure.warnings.push_back("slope classification is " +
                                       to_string(scan.classification) +
                                       "; closure amplification may be uncontrolled");
        report.doc()["closure"] = closure_to_json(closure);
        ClosedFormAssembly assembly = assemble_closed_form(params, leafform, closure);
        report.doc()["closed_form"] = assembly_to_json(assembly, true);
        MetricReport metric = euclidean_metric(params, assembly, sample_grid);
        report.doc()["metric"] = metric_report_to_json(metric);
    });
}

int run_counterexample(const CommonOpts& o, int mode_count, double t) {
    ReportWriter report("counterexample", o);
    return guarded(report, [&] {
        if (mode_count < 1 || mode_count > 8) throw ValidationError("--modes must be in [1, 8]");
        FoliationParams params = params_of(o);
        std::vector<double> s_targets;
        for (int j = 1; j <= mode_count; ++j) s_targets.push_back(2.0 * j);
        LiouvilleModeReport lm = find_liouville_modes(params, s_targets);
        report.doc()["params"] = params_to_json(params);
        report.doc()["liouville_modes"] = liouville_modes_to_json(lm);
        if (lm.modes.empty())
            throw ValidationError("no small-denominator modes found for this slope");
        CounterexampleFamily fam = counterexample_family(params, lm.modes, t);
        report.doc()["family"] = family_to_json(fam);
        ObstructionReport obs = obstruction_detect(params, fam);
        report.doc()["obstruction"] = obstruction_to_json(obs);
        Lemma3Result nu = lemma3_solve_nu(params, fam);
        report.doc()["nu"] = lemma3_to_json(nu);
    });
}

int run_chart(const CommonOpts& o, const std::string& in_mu, const std::string& in_f,
              double patch_radius, int grid, const std::string& base_text,
              const std::string& csv_path, int loops) {
    ReportWriter report("chart", o);
    return guarded(report, [&] {
        SolverConfig cfg = solver_config(o);
        if (o.dimension != "torus3") throw ValidationError("charts are drawn on torus3 leaves");
        FoliationParams params = params_of(o);
        if (in_mu.empty()) throw ValidationError("chart needs --in-mu with the mu field");
        FourierField mu_f = load_field(in_mu, o.dimension, o.cutoff);
        FourierField f_f = FourierField::constant(Torus::T3, o.cutoff, {1.0, 0.0});
        if (!in_f.empty()) {
            f_f = load_field(in_f, o.dimension, o.cutoff);
        } else {
            BeltramiField mu = BeltramiField::validate(mu_f);
            f_f = integrate_homotopy(params, mu, cfg).final_f;
        }
        LeafPatch patch;
        patch.radius = patch_radius;
        patch.grid = grid;
        if (!base_text.empty()) {
            std::istringstream ss(base_text);
            char comma;
            if (!(ss >> patch.base[0] >> comma >> patch.base[1] >> comma >> patch.base[2]))
                throw ValidationError("--base expects x1,x2,x3");
        }
        const LeafForm leafform{f_f, mu_f};
        ChartSample sample = develop(params, leafform, patch);
        const double loop = loop_residual(params, leafform, patch, loops, o.seed);
        report.doc()["params"] = params_to_json(params);
        Json summary = chart_summary_to_json(sample);
        summary["loop_residual"] = loop;
        report.doc()["chart"] = summary;
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            if (!csv) throw ValidationError("cannot write " + csv_path);
            csv << "re_z,im_z,re_psi,im_psi,K\n";
            csv << std::setprecision(17);
            for (std::size_t i = 0; i < sample.zeta.size(); ++i)
                csv << sample.zeta[i].real() << "," << sample.zeta[i].imag() << ","
                    << sample.psi[i].real() << "," << sample.psi[i].imag() << ","
                    << sample.dilatation[i] << "\n";
        }
    });
}

int run_verify(const CommonOpts& o, bool corrupt_u) {
    ReportWriter report("verify", o);
    VerifyOptions vo;
    vo.cutoff = o.cutoff;
    vo.seed = o.seed;
    vo.corrupt_u = corrupt_u;
    VerifyOutcome outcome = run_verify_battery(vo);
    report.doc()["checks"] = outcome.checks;
    report.doc()["all_passed"] = outcome.all_passed;
    if (!outcome.all_passed) {
        std::ostringstream failed;
        for (const auto& c : outcome.checks)
            if (!c.at("pass").get<bool>()) failed << " " << c.at("name").get<std::string>();
        std::cerr << "verify: failed checks:" << failed.str() << "\n";
        report.finish(1);
        return 1;
    }
    report.finish(0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral uniformization of linear foliations on the 3-torus"};
    app.require_subcommand(1);

    CommonOpts analyze_o, solve_o, metric_o, counter_o, chart_o, verify_o;
    analyze_o.cutoff = 2000;
    std::string analyze_csv;
    std::string solve_in, metric_in, chart_in_mu, chart_in_f, chart_base, chart_csv;
    int metric_grid = 33;
    int counter_modes = 3;
    double counter_t = 0.1;
    double chart_radius = 3.141592653589793;
    int chart_grid = 33;
    int chart_loops = 20;
    bool corrupt_u = false;

    CLI::App* analyze = app.add_subcommand("analyze", "classify the slope's denominators");
    add_common(analyze, analyze_o, false);
    analyze->add_option("--csv", analyze_csv, "record-minima CSV path");

    CLI::App* solve = app.add_subcommand("solve", "integrate the homotopy to the closed-form factor");
    add_common(solve, solve_o, true);
    solve->add_option("--in-field", solve_in, "mu field JSON path");

    CLI::App* metric = app.add_subcommand("metric", "full pipeline to the Euclidean metric");
    add_common(metric, metric_o, true);
    metric->add_option("--in-field", metric_in, "mu field JSON path");
    metric->add_option("--sample-grid", metric_grid, "positivity sampling grid per axis");

    CLI::App* counter = app.add_subcommand("counterexample",
                                           "small-denominator obstruction demonstration");
    counter_o.slope_a1 = "liouville(5)";
    counter_o.slope_a2 = "0/1";
    add_common(counter, counter_o, false);
    counter->add_option("--modes", counter_modes, "number of family modes");
    counter->add_option("--t", counter_t, "family parameter");

    CLI::App* chart = app.add_subcommand("chart", "develop a leaf patch to the plane");
    add_common(chart, chart_o, true);
    chart->add_option("--in-mu", chart_in_mu, "mu field JSON path");
    chart->add_option("--in-f", chart_in_f, "factor field JSON path (default: solve)");
    chart->add_option("--radius-patch", chart_radius, "patch radius in the leaf chart");
    chart->add_option("--grid", chart_grid, "patch grid per side");
    chart->add_option("--base", chart_base, "base point x1,x2,x3");
    chart->add_option("--csv", chart_csv, "chart CSV path (re_z, im_z, re_psi, im_psi, K)");
    chart->add_option("--loops", chart_loops, "random loops for the closedness probe");

    CLI::App* verify = app.add_subcommand("verify", "run the cross-module property battery");
    verify_o.cutoff = 4;
    add_common(verify, verify_o, false);
    verify->add_flag("--corrupt-u", corrupt_u, "fault-injection hook for tests")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze_o, analyze_csv);
        if (solve->parsed()) return run_solve(solve_o, solve_in);
        if (metric->parsed()) return run_metric(metric_o, metric_in, metric_grid);
        if (counter->parsed()) return run_counterexample(counter_o, counter_modes, counter_t);
        if (chart->parsed())
            return run_chart(chart_o, chart_in_mu, chart_in_f, chart_radius, chart_grid,
                             chart_base, chart_csv, chart_loops);
        if (verify->parsed()) return run_verify(verify_o, corrupt_u);
    } catch (const folitor::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const folitor::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
