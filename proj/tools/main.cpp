#include <string>

#include <CLI11.hpp>

#include "runner.hpp"
#include "suites.hpp"

int main(int argc, char** argv) {
    CLI::App app{"block LU / BEAM stability experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::string format;
    std::size_t jobs = 0;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "execute the experiments in a config file");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--output", output, "report directory (overrides config)");
    run->add_option("--format", format, "json|csv|both (overrides config)")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    run->add_option("--jobs", jobs, "parallel runs");
    run->add_flag("--quiet", quiet, "suppress the summary line");

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", suite, "one of: norms growth beam zielke modfree psi")
        ->required();
    verify->add_flag("--quiet", quiet, "suppress per-criterion lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (run->parsed())
        return beamlu::cli::run_command(config_path, output, format, jobs, quiet);
    return beamlu::cli::verify_command(suite, quiet);
}
