#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qvrad/cli/config.hpp"
#include "qvrad/cli/execute.hpp"
#include "qvrad/error.hpp"
#include "qvrad/version.hpp"

namespace fs = std::filesystem;
using namespace qvrad::cli;

namespace {

constexpr char const* output_env = "QVRAD_OUTPUT_DIR";
constexpr char const* default_output = "qvrad-out";

//! --out beats the config file, which beats the environment.
fs::path output_directory(std::string const& flag, RunConfig const* config)
{
    if (!flag.empty())
        return flag;
    if (config && config->output.directory)
        return *config->output.directory;
    if (char const* env = std::getenv(output_env); env && *env)
        return env;
    return default_output;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum radiation from refractive-index perturbations"};
    app.set_version_flag("--version", std::string(qvrad::tool_version));

    std::string command_name;
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;

    app.add_option("command", command_name, "spectrum | radiate | rate | sweep | horizon | unruh | validate")
        ->required();
    app.add_option("--config", config_path, "YAML run specification")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory (overrides config and " + std::string(output_env) + ")");
    app.add_option("--seed", seed, "Monte Carlo seed override");
    app.add_option("--workers", workers, "worker threads (does not change results)")->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    auto command = command_from_string(command_name);
    if (!command) {
        std::cerr << "qvrad: unknown command '" << command_name << "'\n";
        return exit_config;
    }

    RunConfig config;
    try {
        std::ifstream in(config_path);
        std::stringstream text;
        text << in.rdbuf();
        config = read_config(text.str());
        if (config.command != *command)
            throw qvrad::Error(qvrad::ErrorCode::Config, "config declares command '" + to_string(config.command) +
                                                             "' but '" + command_name + "' was requested");
        if (seed)
            config.integrator.seed = *seed;
        if (workers)
            config.integrator.workers = *workers;
        validate_config(config);
    } catch (qvrad::Error const& e) {
        fs::path dir = output_directory(out, nullptr);
        write_error(dir, std::string(qvrad::to_string(e.code())), e.what());
        std::cerr << "qvrad: " << e.what() << '\n';
        return exit_config;
    }

    fs::path dir = output_directory(out, &config);
    RunResult r = execute(config, dir);
    if (r.exit_code == exit_config || r.exit_code == exit_module) {
        std::cerr << "qvrad: " << command_name << " failed; see " << (dir / "error.json").string() << '\n';
    } else {
        std::cout << "qvrad " << command_name << ": wrote";
        for (auto const& f : r.files)
            std::cout << ' ' << f;
        std::cout << " to " << dir.string() << (r.exit_code == exit_check_failed ? " (checks failed)" : "") << '\n';
    }
    return r.exit_code;
}
