#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "beamlu/gallery.hpp"
#include "beamlu/matrix_market.hpp"
#include "beamlu/svd.hpp"
#include "config.hpp"
#include "runner.hpp"
#include "suites.hpp"

using namespace beamlu;
using namespace beamlu::cli;
using nlohmann::json;

namespace {

std::string zielke_config() {
    // tau_hat chosen so that tau = tau_hat * ||A||_2 = 0.25
    const double a2 = sigma_max(generate(MatrixSpec::zielke(8)));
    std::ostringstream os;
    os << "format = both\n"
          "seeds = 1\n"
          "[matrices]\n"
          "zielke n=8\n"
          "[blockings]\n"
          "uniform 2\n"
          "[methods]\n"
          "beam\n"
          "[beam]\n";
    os.precision(17);
    os << "tau_hats = " << (0.25 / a2) << "\n";
    os << "woodbury = false\n"
          "[refinement]\n"
          "max_iters = 4\n"
          "target = 1e-12\n"
          "[checks]\n"
          "suites = growth factor det\n";
    return os.str();
}

json scrub_wall_time(json root) {
    for (auto& run : root["runs"]) run.erase("wall_ms");
    return root;
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("valid config round-trips fields") {
        const ExperimentConfig cfg = parse_config_text(zielke_config());
        CHECK(cfg.matrices.size() == 1);
        CHECK(cfg.blockings.size() == 1);
        CHECK(cfg.methods == std::vector<std::string>{"beam"});
        CHECK(cfg.tau_hats.size() == 1);
        CHECK(cfg.refine_max_iters == 4);
        CHECK(cfg.check_suites.size() == 3);
        CHECK_FALSE(cfg.woodbury);
    }
    SUBCASE("missing sections are rejected") {
        CHECK_THROWS_AS(parse_config_text("[matrices]\nzielke n=8\n"), config_error);
    }
    SUBCASE("beam requires tau_hats") {
        CHECK_THROWS_AS(
            parse_config_text("[matrices]\nzielke n=8\n[blockings]\nuniform 2\n"
                              "[methods]\nbeam\n"),
            config_error);
    }
    SUBCASE("unknown keys are named") {
        try {
            parse_config_text("bogus = 1\n[matrices]\nzielke n=8\n[blockings]\nuniform 2\n"
                              "[methods]\nblock_lu_pointwise\n");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("bogus") != std::string::npos);
        }
    }
    SUBCASE("nonexistent matrix market path is named") {
        try {
            parse_config_text("[matrices]\nmm path=/tmp/beamlu_missing.mtx\n"
                              "[blockings]\nuniform 2\n[methods]\nblock_lu_pointwise\n");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("/tmp/beamlu_missing.mtx") != std::string::npos);
        }
    }
}

TEST_CASE("zielke run produces the expected record and exit status") {
    const ExperimentConfig cfg = parse_config_text(zielke_config());
    const RunOutcome out = execute(cfg);
    REQUIRE(out.records.size() == 1);
    const RunRecord& r = out.records[0];
    CHECK(r.n == 8);
    CHECK(r.mods == 3); // one per block except the final block
    CHECK(r.growth.at("max") == doctest::Approx(64.0).epsilon(1e-10));
    CHECK(r.tau_abs == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_FALSE(r.numerical_failure);
    CHECK_FALSE(out.any_check_failed);
    CHECK_FALSE(out.any_numerical_failure);

    // identity-matrix-only config (via the matrix market path): every growth
    // factor exactly 1, zero modifications
    write_matrix_market("/tmp/beamlu_identity.mtx", Matrix::identity(6));
    const ExperimentConfig cfg2 = parse_config_text(
        "[matrices]\nmm path=/tmp/beamlu_identity.mtx\n[blockings]\nuniform 2\n[methods]\n"
        "block_lu_identity\nblock_lu_pointwise\nbeam\n[beam]\ntau_hats = 0.5\n"
        "[checks]\nsuites = growth factor\n");
    const RunOutcome out2 = execute(cfg2);
    REQUIRE(out2.records.size() == 3);
    for (const auto& rec : out2.records) {
        CHECK(rec.mods == 0);
        for (const auto& [name, g] : rec.growth)
            CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_FALSE(out2.any_check_failed);
}

TEST_CASE("reports are deterministic and consistent across formats") {
    const ExperimentConfig cfg = parse_config_text(zielke_config());
    const RunOutcome out1 = execute(cfg);
    const RunOutcome out2 = execute(cfg);
    const json j1 = scrub_wall_time(json::parse(json_report(cfg, out1)));
    const json j2 = scrub_wall_time(json::parse(json_report(cfg, out2)));
    CHECK(j1 == j2);
    CHECK(j1["schema_version"] == 1);

    // CSV and JSON agree on shared fields
    const std::string csv = csv_report(out1);
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::vector<std::string> cols;
    {
        std::istringstream ss(row);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    const json& run = j1["runs"][0];
    CHECK(cols[0] == run["matrix"].get<std::string>());
    CHECK(cols[1] == run["blocking"].get<std::string>());
    CHECK(cols[2] == run["method"].get<std::string>());
    CHECK(std::stod(cols[4]) == doctest::Approx(run["tau"].get<double>()));
    CHECK(std::stoul(cols[7]) == run["mods"].get<std::size_t>());
    CHECK(std::stod(cols[8]) ==
          doctest::Approx(run["growth"]["max"].get<double>()).epsilon(1e-12));
}

TEST_CASE("a per-run blocking mismatch is recorded, not fatal") {
    write_matrix_market("/tmp/beamlu_small.mtx", Matrix::identity(4));
    const ExperimentConfig cfg = parse_config_text(
        "[matrices]\nmm path=/tmp/beamlu_small.mtx\n[blockings]\nexplicit 1,3,5,9\n"
        "[methods]\nblock_lu_identity\n");
    const RunOutcome out = execute(cfg);
    REQUIRE(out.records.size() == 1);
    CHECK(out.records[0].numerical_failure);
    CHECK(out.any_numerical_failure);
}

TEST_CASE("spectral tracing can be disabled and explicit blockings parse") {
    const ExperimentConfig cfg = parse_config_text(
        "trace_spectral = false\n[matrices]\nspd n=8 cond=50\n[blockings]\n"
        "explicit 1,3,5,9\n[methods]\nblock_lu_identity\n[checks]\nsuites = growth\n");
    CHECK_FALSE(cfg.trace_spectral);
    REQUIRE_FALSE(cfg.blockings[0].uniform);
    const RunOutcome out = execute(cfg);
    REQUIRE(out.records.size() == 1);
    CHECK(out.records[0].growth.count("spectral") == 0);
    CHECK(out.records[0].growth.count("max") == 1);
    CHECK(out.records[0].blocking == "explicit1,3,5,9");
}

TEST_CASE("parallel execution yields the same report as serial") {
    ExperimentConfig cfg = parse_config_text(
        "seeds = 1 2 3\n[matrices]\ndiagdom_both n=10 delta=0.5\nspd n=10 cond=100\n"
        "[blockings]\nuniform 2\nuniform 5\n[methods]\nblock_lu_identity\nbeam\n"
        "[beam]\ntau_hats = 0.01\n[checks]\nsuites = growth factor\n");
    cfg.jobs = 1;
    const json serial = scrub_wall_time(json::parse(json_report(cfg, execute(cfg))));
    cfg.jobs = 2;
    const json parallel = scrub_wall_time(json::parse(json_report(cfg, execute(cfg))));
    CHECK(serial == parallel);
}

TEST_CASE("non-finite growth values use the inf sentinel") {
    RunOutcome out;
    RunRecord rec;
    rec.matrix = "synthetic";
    rec.blocking = "uniform2";
    rec.method = "beam";
    rec.n = 8;
    rec.growth["max"] = std::numeric_limits<double>::infinity();
    out.records.push_back(rec);
    ExperimentConfig cfg;
    const json j = json::parse(json_report(cfg, out));
    CHECK(j["runs"][0]["growth"]["max"] == "inf");
    CHECK(j["runs"][0]["growth"]["max_log10"] == "inf");
    const std::string csv = csv_report(out);
    CHECK(csv.find(",inf,") != std::string::npos);
}

TEST_CASE("verify command exit codes") {
    CHECK(verify_command("nosuch", true) == 1);
    CHECK(verify_command("zielke", true) == 0);
}

TEST_CASE("cli binary end-to-end") {
    const char* cli = std::getenv("BEAMLU_CLI");
    REQUIRE(cli != nullptr);
    const std::string dir = "/tmp/beamlu_cli_test";
    REQUIRE(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0);
    {
        std::ofstream cf(dir + "/config.txt");
        cf << zielke_config();
    }
    const std::string cmd = std::string(cli) + " run " + dir + "/config.txt --output " + dir +
                            "/out --quiet";
    const int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(std::ifstream(dir + "/out/report.json").good());
    CHECK(std::ifstream(dir + "/out/report.csv").good());

    const int rc_json = std::system((std::string(cli) + " run " + dir +
                                     "/config.txt --output " + dir +
                                     "/json_only --format json --quiet")
                                        .c_str());
    CHECK(WEXITSTATUS(rc_json) == 0);
    CHECK(std::ifstream(dir + "/json_only/report.json").good());
    CHECK_FALSE(std::ifstream(dir + "/json_only/report.csv").good());

    const int rc_bad = std::system((std::string(cli) + " run /nonexistent.cfg 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(rc_bad) == 1);
    const int rc_usage = std::system((std::string(cli) + " 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(rc_usage) != 0);
    const int rc_suite =
        std::system((std::string(cli) + " verify nosuch 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(rc_suite) == 1);
}
