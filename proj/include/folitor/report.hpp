#pragma once

#include <cstdint>

#include "folitor/chart.hpp"
#include "folitor/diophantine.hpp"
#include "folitor/homotopy.hpp"
#include "folitor/json_io.hpp"
#include "folitor/kernel_oracle.hpp"
#include "folitor/metric.hpp"

namespace folitor {

inline constexpr const char* kSchemaTag = "folitor-report/1";

Json mode_to_json(ModeIndex n);
Json slope_to_json(const Slope& s);
Json params_to_json(const FoliationParams& p);

Json diophantine_report_to_json(const DiophantineReport& rep);
Json liouville_modes_to_json(const LiouvilleModeReport& rep);
Json diophantine_check_to_json(const DiophantineCheck& chk);
Json homotopy_solution_to_json(const HomotopySolution& sol, bool include_snapshots = false);
Json prop1_to_json(const Prop1Probe& probe);
Json oracle_to_json(const KernelOracleResult& res);
Json closure_to_json(const ClosureSolution& cs);
Json assembly_to_json(const ClosedFormAssembly& as, bool include_fields = false);
Json metric_report_to_json(const MetricReport& rep);
Json family_to_json(const CounterexampleFamily& fam);
Json obstruction_to_json(const ObstructionReport& rep);
Json lemma3_to_json(const Lemma3Result& res);
Json chart_summary_to_json(const ChartSample& cs);

struct VerifyOptions {
    int cutoff = 4;
    std::uint64_t seed = 7;
    bool corrupt_u = false;  // test hook: perturbs one unitary eigenvalue
};

struct VerifyOutcome {
    bool all_passed = false;
    Json checks;  // array of {name, pass, max_error, ...}
};

// The cross-module property battery behind the `verify` subcommand.
VerifyOutcome run_verify_battery(const VerifyOptions& options);

}  // namespace folitor
