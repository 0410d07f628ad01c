#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinchain/report.hpp"

namespace {

using spinchain::RunConfig;

struct FlagText {
    std::string alpha, beta, gamma, delta, mu, s, Q;
    std::string seeds;
    std::string config_path;
};

// seeds: "re,im;re,im|re,im;..."  one seed per '|', momenta per ';'
std::vector<spinchain::Momenta> parse_seeds(const std::string& text) {
    std::vector<spinchain::Momenta> out;
    std::string rest = text;
    while (!rest.empty()) {
        const auto bar = rest.find('|');
        std::string one = rest.substr(0, bar);
        rest = (bar == std::string::npos) ? std::string{} : rest.substr(bar + 1);
        spinchain::Momenta k;
        while (!one.empty()) {
            const auto semi = one.find(';');
            k.push_back(spinchain::parse_complex(one.substr(0, semi)));
            one = (semi == std::string::npos) ? std::string{} : one.substr(semi + 1);
        }
        if (!k.empty()) out.push_back(std::move(k));
    }
    return out;
}

int emit(const spinchain::CommandResult& result, const RunConfig& cfg,
         const std::string& command) {
    std::string text;
    if (cfg.format == "json") {
        text = result.report.dump(2);
        text += '\n';
    } else if (cfg.format == "csv") {
        text = spinchain::to_csv(command, result.report);
    } else {
        throw spinchain::UsageError("unknown format '" + cfg.format + "' (json or csv)");
    }
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw spinchain::UsageError("cannot open output file '" + cfg.out + "'");
        f << text;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coordinate Bethe ansatz laboratory for XXX/XXZ spin chains"};
    app.require_subcommand(1);

    RunConfig cfg;
    FlagText raw;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "xxx-periodic | xxx-open | xxz-open");
        sub->add_option("--L", cfg.L, "chain length");
        sub->add_option("--m,--n", cfg.m, "down spins / excitation count");
        sub->add_option("--alpha", raw.alpha, "left boundary parameter (re or re,im)");
        sub->add_option("--beta", raw.beta, "left boundary parameter");
        sub->add_option("--gamma", raw.gamma, "right boundary parameter");
        sub->add_option("--delta", raw.delta, "right boundary parameter");
        sub->add_option("--mu", raw.mu, "triangular flip amplitude");
        sub->add_option("--s", raw.s, "xxz boundary twist");
        sub->add_option("--Q", raw.Q, "xxz bulk deformation");
        sub->add_option("--tol", cfg.tol, "solver tolerance");
        sub->add_option("--max-iter", cfg.max_iter, "solver iteration cap");
        sub->add_option("--threshold", cfg.threshold, "verification threshold");
        sub->add_option("--seeds", raw.seeds, "explicit seeds re,im;re,im|...");
        sub->add_flag("--sweep,!--no-sweep", cfg.sweep, "run the quantum-number sweep");
        sub->add_option("--format", cfg.format, "json | csv");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--config", raw.config_path, "JSON config file");
        return sub;
    };

    CLI::App* spectrum = add_common(app.add_subcommand("spectrum", "exact spectrum via the dense oracle"));
    CLI::App* solve = add_common(app.add_subcommand("solve", "solve the Bethe equations"));
    CLI::App* verify = add_common(app.add_subcommand("verify", "solve, rebuild states, verify eigenpairs"));
    CLI::App* scan = add_common(app.add_subcommand("scan-constraints", "xxz boundary constraint table"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return spinchain::kExitUsage;
    }

    try {
        // precedence: defaults < config file < explicit flags
        RunConfig defaults;
        if (!raw.config_path.empty()) {
            std::ifstream f(raw.config_path);
            if (!f) throw spinchain::UsageError("cannot read config file '" + raw.config_path + "'");
            nlohmann::json j = nlohmann::json::parse(f);
            RunConfig from_file = spinchain::apply_config_json(j, defaults);

            CLI::App* active = app.get_subcommands().front();
            auto flag_given = [&](const std::string& name) {
                return active->count(name) > 0;
            };
            if (!flag_given("--family")) cfg.family = from_file.family;
            if (!flag_given("--L")) cfg.L = from_file.L;
            if (!flag_given("--m")) cfg.m = from_file.m;
            if (!flag_given("--tol")) cfg.tol = from_file.tol;
            if (!flag_given("--max-iter")) cfg.max_iter = from_file.max_iter;
            if (!flag_given("--threshold")) cfg.threshold = from_file.threshold;
            if (!flag_given("--sweep")) cfg.sweep = from_file.sweep;
            if (!flag_given("--format")) cfg.format = from_file.format;
            if (!flag_given("--out")) cfg.out = from_file.out;
            if (raw.alpha.empty()) cfg.alpha = from_file.alpha;
            if (raw.beta.empty()) cfg.beta = from_file.beta;
            if (raw.gamma.empty()) cfg.gamma = from_file.gamma;
            if (raw.delta.empty()) cfg.delta = from_file.delta;
            if (raw.mu.empty()) cfg.mu = from_file.mu;
            if (raw.s.empty()) cfg.s = from_file.s;
            if (raw.Q.empty()) cfg.Q = from_file.Q;
            if (raw.seeds.empty()) cfg.seeds = from_file.seeds;
        }
        if (!raw.alpha.empty()) cfg.alpha = spinchain::parse_complex(raw.alpha);
        if (!raw.beta.empty()) cfg.beta = spinchain::parse_complex(raw.beta);
        if (!raw.gamma.empty()) cfg.gamma = spinchain::parse_complex(raw.gamma);
        if (!raw.delta.empty()) cfg.delta = spinchain::parse_complex(raw.delta);
        if (!raw.mu.empty()) cfg.mu = spinchain::parse_complex(raw.mu);
        if (!raw.s.empty()) cfg.s = spinchain::parse_complex(raw.s);
        if (!raw.Q.empty()) cfg.Q = spinchain::parse_complex(raw.Q);
        if (!raw.seeds.empty()) cfg.seeds = parse_seeds(raw.seeds);

        spinchain::CommandResult result;
        std::string command;
        if (spectrum->parsed()) {
            command = "spectrum";
            result = spinchain::cmd_spectrum(cfg);
        } else if (solve->parsed()) {
            command = "solve";
            result = spinchain::cmd_solve(cfg);
        } else if (verify->parsed()) {
            command = "verify";
            result = spinchain::cmd_verify(cfg);
        } else if (scan->parsed()) {
            command = "scan-constraints";
            result = spinchain::cmd_scan_constraints(cfg);
        }
        return emit(result, cfg, command);
    } catch (const spinchain::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return spinchain::kExitUsage;
    } catch (const spinchain::ResourceGuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return spinchain::kExitResourceGuard;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return spinchain::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return spinchain::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinchain::kExitUsage;
    }
}
