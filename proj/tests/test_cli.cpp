#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "folitor/json_io.hpp"
#include "folitor/report.hpp"

using namespace folitor;
namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* env = std::getenv("FOLITOR_BIN");
    REQUIRE(env != nullptr);
    return env;
}

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "folitor_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

Json strip_timing(Json j) {
    j.erase("timing");
    return j;
}

void write_constant_mu(const fs::path& path, double re, double im, int cutoff, int dim) {
    Json j;
    j["dim"] = dim;
    j["cutoff"] = cutoff;
    Json row = dim == 3 ? Json::array({0, 0, 0, re, im}) : Json::array({0, 0, re, im});
    j["modes"] = Json::array({row});
    save_json_file(path.string(), j);
}

// Minimal structural validation against our draft-07 subset: checks type,
// required, properties (recursively), items.
bool validates(const Json& schema, const Json& value);

bool type_matches(const std::string& t, const Json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    return false;
}

bool validates(const Json& schema, const Json& value) {
    if (schema.contains("type") && !type_matches(schema.at("type"), value)) return false;
    if (schema.contains("required"))
        for (const auto& key : schema.at("required"))
            if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties") && value.is_object())
        for (const auto& [key, sub] : schema.at("properties").items())
            if (value.contains(key) && !validates(sub, value.at(key))) return false;
    if (schema.contains("items") && value.is_array())
        for (const auto& item : value)
            if (!validates(schema.at("items"), item)) return false;
    return true;
}

Json load_schema(const std::string& name) {
    const char* env = std::getenv("FOLITOR_SCHEMAS");
    REQUIRE(env != nullptr);
    return load_json_file(std::string(env) + "/" + name);
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("solve with mu = 0 reports the constant factor") {
        const fs::path mu = temp_dir() / "mu_zero.json";
        const fs::path out = temp_dir() / "solve_zero.json";
        write_constant_mu(mu, 0.0, 0.0, 4, 3);
        const int rc = run("solve --cutoff 4 --in-field " + mu.string() + " --out " +
                           out.string());
        CHECK(rc == 0);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("schema").get<std::string>() == kSchemaTag);
        const FourierField f = field_from_json(rep.at("solution").at("final_field"));
        CHECK(std::abs(average(f) - Complex{1.0, 0.0}) < 1e-14);
        CHECK(norm(f, NormSpec::sobolev(0)) == doctest::Approx(1.0));
        CHECK(validates(load_schema("report.schema.json"), rep));
        CHECK(validates(load_schema("field.schema.json"),
                        rep.at("solution").at("final_field")));
    }

    TEST_CASE("solve rejects a Beltrami bound violation with exit 2") {
        const fs::path mu = temp_dir() / "mu_big.json";
        const fs::path out = temp_dir() / "solve_big.json";
        write_constant_mu(mu, 1.2, 0.0, 3, 3);
        const int rc = run("solve --cutoff 3 --in-field " + mu.string() + " --out " +
                           out.string());
        CHECK(rc == 2);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("error").get<std::string>().find("Beltrami bound violated") !=
              std::string::npos);
    }

    TEST_CASE("metric pipeline refuses non-dense leaves with exit 2") {
        const fs::path mu = temp_dir() / "mu_small.json";
        const fs::path out = temp_dir() / "metric_flat.json";
        write_constant_mu(mu, 0.2, 0.0, 3, 3);
        const int rc = run("metric --slope-a1 0/1 --slope-a2 0/1 --cutoff 3 --in-field " +
                           mu.string() + " --out " + out.string());
        CHECK(rc == 2);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("error").get<std::string>().find("leaves not dense") !=
              std::string::npos);
    }

    TEST_CASE("counterexample reports the obstruction verdict") {
        const fs::path out = temp_dir() / "counter.json";
        const int rc = run("counterexample --modes 3 --t 0.1 --out " + out.string());
        CHECK(rc == 0);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("obstruction").at("verdict").get<std::string>() == "obstructed");
        CHECK(rep.at("nu").at("sup_l1_bound").get<double>() < 1.0);
        CHECK(validates(load_schema("report.schema.json"), rep));
    }

    TEST_CASE("analyze emits CSV records") {
        const fs::path out = temp_dir() / "analyze.json";
        const fs::path csv = temp_dir() / "analyze.csv";
        const int rc = run("analyze --slope-a1 golden --slope-a2 0 --cutoff 200 --out " +
                           out.string() + " --csv " + csv.string());
        CHECK(rc == 0);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("analysis").at("classification").get<std::string>() ==
              "diophantine-evidence");
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "p,m,k,absN,d");
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == rep.at("analysis").at("records").size());
    }

    TEST_CASE("chart writes the expected CSV columns") {
        const fs::path mu = temp_dir() / "mu_chart.json";
        const fs::path out = temp_dir() / "chart.json";
        const fs::path csv = temp_dir() / "chart.csv";
        write_constant_mu(mu, 0.3, 0.0, 3, 3);
        const int rc = run("chart --cutoff 3 --in-mu " + mu.string() +
                           " --grid 5 --radius-patch 1.0 --out " + out.string() + " --csv " +
                           csv.string());
        CHECK(rc == 0);
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == "re_z,im_z,re_psi,im_psi,K");
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows == 25);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("chart").at("loop_residual").get<double>() < 1e-8);
    }

    TEST_CASE("verify passes at the default configuration") {
        const fs::path out = temp_dir() / "verify.json";
        CHECK(run("verify --cutoff 4 --seed 7 --out " + out.string()) == 0);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("all_passed").get<bool>());
    }

    TEST_CASE("verify names the corrupted identity under fault injection") {
        const fs::path out = temp_dir() / "verify_bad.json";
        CHECK(run("verify --cutoff 4 --seed 7 --corrupt-u --out " + out.string()) == 1);
        const Json rep = load_json_file(out.string());
        CHECK(!rep.at("all_passed").get<bool>());
        bool named = false;
        for (const auto& c : rep.at("checks"))
            if (c.at("name") == "u_intertwines_leaf_derivatives" && !c.at("pass").get<bool>())
                named = true;
        CHECK(named);
    }

    TEST_CASE("verify is deterministic apart from timing") {
        const fs::path out1 = temp_dir() / "verify_a.json";
        const fs::path out2 = temp_dir() / "verify_b.json";
        REQUIRE(run("verify --cutoff 4 --seed 7 --out " + out1.string()) == 0);
        REQUIRE(run("verify --cutoff 4 --seed 7 --out " + out2.string()) == 0);
        const Json a = strip_timing(load_json_file(out1.string()));
        const Json b = strip_timing(load_json_file(out2.string()));
        CHECK(a.dump() == b.dump());
    }

    TEST_CASE("unreadable input exits 2 naming the path") {
        const fs::path out = temp_dir() / "missing.json";
        CHECK(run("solve --cutoff 3 --in-field /nonexistent/mu.json --out " + out.string()) ==
              2);
        const Json rep = load_json_file(out.string());
        CHECK(rep.at("error").get<std::string>().find("/nonexistent/mu.json") !=
              std::string::npos);
    }
}
