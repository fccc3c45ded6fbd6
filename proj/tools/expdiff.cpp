// expdiff <command> --config <path> [--out <dir>] [--quiet]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "expdiff/errors.hpp"
#include "expdiff/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Geodesic flows of right-invariant Sobolev metrics on Diff(S^1)"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    bool quiet = false;

    for (const char* name : {"evolve", "exp", "log", "invariants", "convergence", "burgers-check"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_flag("--quiet", quiet, "only report errors");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : expdiff::kExitConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    expdiff::ExperimentSpec spec;
    try {
        std::ifstream in(config_path);
        if (!in) throw expdiff::ConfigError("cannot open config file '" + config_path + "'");
        std::stringstream text;
        text << in.rdbuf();
        spec = expdiff::parse_config(text.str(), expdiff::parse_command(command));
    } catch (const expdiff::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return expdiff::kExitConfigError;
    }
    if (!out_dir.empty()) spec.output_dir = out_dir;
    return expdiff::run(spec, std::cerr, quiet);
}
