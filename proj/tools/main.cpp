#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "giant/error.hpp"

using namespace giant;
using namespace giant::cli;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config " + path + " must hold a JSON object");
    return doc;
}

std::string section_name(std::string cmd) {
    for (char& c : cmd)
        if (c == '-') c = '_';
    return cmd;
}

struct Overrides {
    std::optional<std::string> preset, gate, mode;
    std::optional<int> samples, steps;
    std::optional<std::vector<int>> step_list;
    std::optional<double> jz, gamma, gamma_mhz;

    void apply(json& cfg, const std::string& cmd) const {
        json& s = cfg[section_name(cmd)];
        if (!s.is_object()) s = json::object();
        if (preset) cfg["layout"]["preset"] = *preset;
        if (samples) s["samples"] = *samples;
        if (gate) s["gate"] = *gate;
        if (gamma_mhz) s["gamma_mhz"] = *gamma_mhz;
        if (jz) s["model"]["Jz"] = *jz;
        if (gamma) s["model"]["Gamma"] = *gamma;
        if (steps) s["steps"] = *steps;
        if (step_list) s["steps"] = *step_list;
        if (mode) s[cmd == "trotter-error" ? "gates" : "mode"] = *mode;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"giant-atom quantum simulator: rates, gates and Trotterised XXZ dynamics"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool seedless = false, resume = false;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (default out/<subcommand>, or $GIANT_OUT)");
    app.add_option("--jobs", jobs, "worker threads for sweep points")->check(CLI::PositiveNumber);
    app.add_flag("--seedless", seedless, "accepted for compatibility; every computation is deterministic");
    app.add_flag("--resume", resume, "reuse sweep points recorded in the output manifest");
    app.add_flag_callback("--version", [] {
        std::cout << tool_version() << "\n";
        std::exit(0);
    });

    Overrides ov;
    std::string chosen;
    for (const auto& info : commands()) {
        CLI::App* sub = app.add_subcommand(info.name, info.help);
        const std::string name = info.name;
        sub->callback([&chosen, name] { chosen = name; });
        if (name == "rates" || name == "df") sub->add_option("--preset", ov.preset, "two_atom, chain or grid");
        if (name == "rates") sub->add_option("--samples", ov.samples, "frequency samples over the band");
        if (name == "gate-fidelity") sub->add_option("--gate", ov.gate, "iswap or cz");
        if (name == "gate-fidelity" || name == "czphi-scan")
            sub->add_option("--gamma-mhz", ov.gamma_mhz, "coupling strength gamma/2pi in MHz");
        if (name == "xxz" || name == "trotter-error") {
            sub->add_option("--jz", ov.jz, "Jz in units of J");
            sub->add_option("--gamma", ov.gamma, "end-site decay Gamma in units of J");
            sub->add_option("--mode", ov.mode, "hardware, ideal (or exact for xxz)");
        }
        if (name == "xxz") sub->add_option("--steps", ov.steps, "Trotter steps");
        if (name == "trotter-error") sub->add_option("--steps", ov.step_list, "Trotter step counts")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
    }
    (void)seedless;

    try {
        json cfg = load_config(config_path);
        ov.apply(cfg, chosen);
        if (out_dir.empty()) {
            const char* env = std::getenv("GIANT_OUT");
            out_dir = env && *env ? std::string(env) : "out/" + chosen;
        }
        RunContext run(chosen, cfg, out_dir, resume);
        if (run.resumed_points() > 0)
            std::cerr << "resuming: " << run.resumed_points() << " points taken from the manifest\n";
        for (const auto& info : commands())
            if (chosen == info.name) info.run(run, jobs);
        run.checkpoint(true);
        std::cerr << chosen << ": wrote " << out_dir << "\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::config);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return static_cast<int>(ErrorKind::capacity);
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::numeric);
    }
}
