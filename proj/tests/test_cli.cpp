#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsblow/cli/runner.hpp"

using namespace nsblow::cli;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path temp_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("nsblow-cli-") + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}
}  // namespace

TEST_CASE("empty bundle emits header-only CSVs") {
    ReportBundle bundle;
    bundle.table("empty_table");
    fs::path dir = temp_dir("empty");
    emit_csv(bundle, dir.string());
    std::string body = slurp(dir / "empty_table.csv");
    CHECK(body == "k,t_k,value,error_estimate,tail_estimate\n");
}

TEST_CASE("identical config and seed give byte-identical CSV bodies") {
    ExperimentConfig cfg;
    cfg.k_max = 6;
    cfg.grid_n = 16;
    cfg.grid_L = 4.0;
    cfg.variant = "critical-a";

    fs::path d1 = temp_dir("det1"), d2 = temp_dir("det2");
    for (const fs::path& d : {d1, d2}) {
        ReportBundle bundle;
        run_heat(cfg, bundle);
        emit_csv(bundle, d.string());
        emit_structured(bundle, cfg, d.string());
    }
    CHECK(slurp(d1 / "blowup_fit.csv") == slurp(d2 / "blowup_fit.csv"));
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
}

TEST_CASE("blowup-fit CSV contains exactly k_max + 1 rows") {
    ExperimentConfig cfg;
    cfg.k_max = 5;
    cfg.variant = "critical-a";
    ReportBundle bundle;
    run_heat(cfg, bundle);
    fs::path dir = temp_dir("rows");
    emit_csv(bundle, dir.string());
    // header plus one row per ladder level t_0 .. t_k_max
    CHECK(count_lines(slurp(dir / "blowup_fit.csv")) == cfg.k_max + 2);
}

TEST_CASE("heat suite reports the rate fit and the residual audit") {
    ExperimentConfig cfg;
    cfg.k_max = 8;
    cfg.variant = "critical-a";
    ReportBundle bundle;
    run_heat(cfg, bundle);
    bool saw_rate = false, saw_residual = false;
    for (const auto& a : bundle.audits) {
        if (a.name == "heat-blowup-rate") saw_rate = a.pass;
        if (a.name == "heat-residual") saw_residual = a.pass;
    }
    CHECK(saw_rate);
    CHECK(saw_residual);
    CHECK(bundle.all_pass());
}

TEST_CASE("malformed config values are diagnosed with their key") {
    fs::path dir = temp_dir("cfg");
    fs::path good = dir / "good.cfg";
    {
        std::ofstream out(good);
        out << "# comment line\n";
        out << "variant = critical-a\n";
        out << "k_max = 9   # depth\n";
        out << "tol = 1e-7\n";
    }
    ExperimentConfig cfg = load_config(good.string());
    CHECK(cfg.variant == "critical-a");
    CHECK(cfg.k_max == 9);
    CHECK(cfg.tol == 1e-7);

    fs::path bad = dir / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "T = -1\n";
    }
    CHECK_THROWS_WITH_AS(load_config(bad.string()),
                         doctest::Contains("'T'"), ConfigError);

    fs::path unknown = dir / "unknown.cfg";
    {
        std::ofstream out(unknown);
        out << "velocity = 3\n";
    }
    CHECK_THROWS_WITH_AS(load_config(unknown.string()),
                         doctest::Contains("unknown config key"), ConfigError);

    fs::path garbled = dir / "garbled.cfg";
    {
        std::ofstream out(garbled);
        out << "k_max = twelve\n";
    }
    CHECK_THROWS_WITH_AS(load_config(garbled.string()),
                         doctest::Contains("k_max"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
    ExperimentConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = a.seed + 1;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("exit status contract: nonzero iff an audit failed") {
    ExperimentConfig cfg;
    cfg.k_max = 8;
    cfg.variant = "critical-a";
    cfg.out = temp_dir("status").string();
    ReportBundle bundle;
    CHECK(run("heat", cfg, bundle) == 0);
    bundle.record("synthetic-failure", false, 1.0, "injected");
    ReportBundle bundle2 = bundle;
    CHECK(run("baseline", cfg, bundle2) == 1);
}
