#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spinchain/ansatz.hpp"
#include "spinchain/bethe.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/numeric.hpp"

namespace spinchain {

// Exit codes shared by the CLI and the command implementations.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailure = 1,
    kExitUsage = 2,
    kExitResourceGuard = 3,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResourceGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string family = "xxx-periodic";  // xxx-periodic | xxx-open | xxz-open
    int L = 4;
    int m = 1;  // down spins (periodic/diagonal) or excitation count n (triangular)
    Complex alpha{0, 0}, beta{0, 0}, gamma{0, 0}, delta{0, 0};
    Complex mu{0, 0};
    Complex s{0, 0};
    Complex Q{1, 0};
    double tol = 1e-11;
    int max_iter = 200;
    double threshold = 1e-8;  // verification gate
    std::vector<Momenta> seeds;
    bool sweep = true;
    std::string format = "json";  // json | csv
    std::string out;              // output path, empty = stdout
};

// Config-file support: apply the keys present in j on top of base.
RunConfig apply_config_json(const nlohmann::json& j, RunConfig base);

nlohmann::json config_echo(const RunConfig& cfg);

ModelSpec model_from_config(const RunConfig& cfg);

struct CommandResult {
    nlohmann::json report;
    int exit_code = kExitOk;
};

CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_scan_constraints(const RunConfig& cfg);

// Render a report as CSV with a fixed column order per command.
std::string to_csv(const std::string& command, const nlohmann::json& report);

// Serialize complex numbers as [re, im].
nlohmann::json complex_json(Complex z);
Complex parse_complex(const std::string& text);  // "a" or "a,b" or "(a,b)"

}  // namespace spinchain
