#include "spinchain/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinchain/oracle.hpp"
#include "spinchain/xxz.hpp"

namespace spinchain {

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex parse_complex(const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](char c) { return c == '(' || c == ')' || c == ' '; }),
            t.end());
    if (t.empty()) throw UsageError("empty complex literal");
    const auto comma = t.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(t), 0);
        return Complex(std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1)));
    } catch (const std::exception&) {
        throw UsageError("cannot parse complex literal '" + text + "' (use re or re,im)");
    }
}

namespace {

Complex complex_from_json(const nlohmann::json& j, const char* key) {
    if (j.is_number()) return Complex(j.get<double>(), 0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    if (j.is_string()) return parse_complex(j.get<std::string>());
    throw UsageError(std::string("config key '") + key + "' must be a number or [re, im]");
}

void check_family(const std::string& family) {
    if (family != "xxx-periodic" && family != "xxx-open" && family != "xxz-open")
        throw UsageError("unknown family '" + family +
                         "' (expected xxx-periodic, xxx-open or xxz-open)");
}

}  // namespace

RunConfig apply_config_json(const nlohmann::json& j, RunConfig cfg) {
    if (!j.is_object()) throw UsageError("config file must contain a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "family") cfg.family = value.get<std::string>();
        else if (key == "L") cfg.L = value.get<int>();
        else if (key == "m" || key == "n") cfg.m = value.get<int>();
        else if (key == "alpha") cfg.alpha = complex_from_json(value, "alpha");
        else if (key == "beta") cfg.beta = complex_from_json(value, "beta");
        else if (key == "gamma") cfg.gamma = complex_from_json(value, "gamma");
        else if (key == "delta") cfg.delta = complex_from_json(value, "delta");
        else if (key == "mu") cfg.mu = complex_from_json(value, "mu");
        else if (key == "s") cfg.s = complex_from_json(value, "s");
        else if (key == "Q") cfg.Q = complex_from_json(value, "Q");
        else if (key == "tol") cfg.tol = value.get<double>();
        else if (key == "max_iter") cfg.max_iter = value.get<int>();
        else if (key == "threshold") cfg.threshold = value.get<double>();
        else if (key == "sweep") cfg.sweep = value.get<bool>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& seed : value) {
                Momenta k;
                for (const auto& comp : seed) k.push_back(complex_from_json(comp, "seeds"));
                cfg.seeds.push_back(std::move(k));
            }
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

nlohmann::json config_echo(const RunConfig& cfg) {
    nlohmann::json j;
    j["family"] = cfg.family;
    j["L"] = cfg.L;
    j["m"] = cfg.m;
    j["alpha"] = complex_json(cfg.alpha);
    j["beta"] = complex_json(cfg.beta);
    j["gamma"] = complex_json(cfg.gamma);
    j["delta"] = complex_json(cfg.delta);
    j["mu"] = complex_json(cfg.mu);
    j["s"] = complex_json(cfg.s);
    j["Q"] = complex_json(cfg.Q);
    j["tol"] = cfg.tol;
    j["max_iter"] = cfg.max_iter;
    j["threshold"] = cfg.threshold;
    j["sweep"] = cfg.sweep;
    j["format"] = cfg.format;
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& k : cfg.seeds) {
        nlohmann::json one = nlohmann::json::array();
        for (Complex c : k) one.push_back(complex_json(c));
        seeds.push_back(one);
    }
    j["seeds"] = seeds;
    return j;
}

ModelSpec model_from_config(const RunConfig& cfg) {
    check_family(cfg.family);
    if (cfg.L < 2) throw UsageError("L must be >= 2");
    if (cfg.L > kMaxFullSpaceL)
        throw ResourceGuardError("L exceeds the full-space guard (" +
                                 std::to_string(kMaxFullSpaceL) + ")");
    if (cfg.family == "xxx-periodic") return ModelSpec::periodic(cfg.L);
    if (cfg.family == "xxx-open")
        return ModelSpec::open_xxx(cfg.L, cfg.alpha, cfg.beta, cfg.gamma, cfg.delta, cfg.mu);
    if (std::abs(cfg.Q) < kPoleTolerance) throw UsageError("xxz-open requires Q != 0");
    return ModelSpec::open_xxz(cfg.L, cfg.alpha, cfg.beta, cfg.gamma, cfg.delta, cfg.s, cfg.Q);
}

namespace {

SolverOptions solver_options(const RunConfig& cfg) {
    if (cfg.tol <= 0) throw UsageError("tol must be positive");
    if (cfg.max_iter < 1) throw UsageError("max_iter must be >= 1");
    SolverOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    return opts;
}

void check_sector_count(const RunConfig& cfg) {
    if (cfg.m < 0 || cfg.m > cfg.L) throw UsageError("m must lie in [0, L]");
}

std::vector<BetheSolution> run_solver(const RunConfig& cfg, const ModelSpec& spec) {
    check_sector_count(cfg);
    const SolverOptions opts = solver_options(cfg);
    std::vector<BetheSolution> sols;
    for (const Momenta& k : cfg.seeds) {
        if (static_cast<int>(k.size()) != cfg.m) throw UsageError("seed size differs from m");
        Seed seed;
        seed.momenta = k;
        sols.push_back(solve(spec, cfg.m, seed, opts));
    }
    if (cfg.sweep) {
        auto more = sweep(spec, cfg.m, opts);
        sols.insert(sols.end(), more.begin(), more.end());
    }
    return deduplicate(std::move(sols));
}

nlohmann::json solution_json(const BetheSolution& s, int index) {
    nlohmann::json j;
    j["index"] = index;
    j["converged"] = s.converged;
    j["filtered"] = s.filtered_reason;
    nlohmann::json mom = nlohmann::json::array();
    for (Complex c : s.k) mom.push_back(complex_json(c));
    j["momenta"] = mom;
    j["quantum_numbers"] = s.quantum_numbers;
    j["energy"] = complex_json(s.energy);
    j["residual_norm"] = s.residual_norm;
    j["iterations"] = s.iterations;
    j["slow_convergence"] = s.slow_convergence;
    return j;
}

bool usable(const BetheSolution& s) { return s.converged && s.filtered_reason.empty(); }

}  // namespace

CommandResult cmd_spectrum(const RunConfig& cfg) {
    const ModelSpec spec = model_from_config(cfg);
    if ((std::size_t{1} << cfg.L) > kMaxDenseDim)
        throw ResourceGuardError("dense spectrum needs 2^L <= " + std::to_string(kMaxDenseDim));
    const OperatorMatrix H = assemble(spec);
    const SpectrumReport rep = dense_eigenvalues(to_dense(H));

    std::vector<Complex> sorted = rep.eigenvalues;
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    CommandResult out;
    out.report["config"] = config_echo(cfg);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        nlohmann::json row;
        row["index"] = i;
        row["eigenvalue"] = complex_json(sorted[i]);
        rows.push_back(row);
    }
    out.report["results"] = rows;
    out.report["summary"] = {{"dimension", H.dim},
                             {"qr_sweeps", rep.qr_sweeps},
                             {"all_converged", rep.all_converged}};
    return out;
}

CommandResult cmd_solve(const RunConfig& cfg) {
    const ModelSpec spec = model_from_config(cfg);
    if (spec.family == ModelFamily::XxzOpen)
        throw UsageError("solve supports the xxx families only");
    const auto sols = run_solver(cfg, spec);

    CommandResult out;
    out.report["config"] = config_echo(cfg);
    nlohmann::json rows = nlohmann::json::array();
    int idx = 0, conv = 0, filt = 0;
    for (const auto& s : sols) {
        if (!s.converged) continue;  // unconverged seeds summarized, not listed
        rows.push_back(solution_json(s, idx++));
        if (usable(s)) ++conv;
        if (!s.filtered_reason.empty()) ++filt;
    }
    int unconv = 0;
    for (const auto& s : sols)
        if (!s.converged) ++unconv;
    out.report["results"] = rows;
    out.report["summary"] = {{"distinct_converged", conv},
                             {"filtered", filt},
                             {"unconverged_seeds", unconv}};
    return out;
}

CommandResult cmd_verify(const RunConfig& cfg) {
    const ModelSpec spec = model_from_config(cfg);
    if (spec.family == ModelFamily::XxzOpen)
        throw UsageError("verify supports the xxx families only");
    if ((std::size_t{1} << cfg.L) > kMaxDenseDim)
        throw ResourceGuardError("verification needs 2^L <= " + std::to_string(kMaxDenseDim));
    const auto sols = run_solver(cfg, spec);

    const OperatorMatrix H = assemble(spec);
    const OperatorMatrix sector = assemble_sector(spec, cfg.m);
    const SpectrumReport sector_spec = dense_eigenvalues(to_dense(sector));

    CommandResult out;
    out.report["config"] = config_echo(cfg);
    nlohmann::json rows = nlohmann::json::array();

    double max_residual = 0;
    std::vector<Complex> predicted;
    int idx = 0;
    for (const auto& s : sols) {
        if (!s.converged) continue;
        nlohmann::json row = solution_json(s, idx++);
        if (usable(s)) {
            try {
                const BuiltState built = build_state(spec, s.k);
                const double resid = eigenpair_residual(H, built.state, built.energy);
                row["eigenpair_residual"] = resid;
                max_residual = std::max(max_residual, resid);
                predicted.push_back(built.energy);
            } catch (const SingularMomentumError& e) {
                row["filtered"] = std::string("state assembly: ") + e.what();
            }
        }
        rows.push_back(row);
    }
    const MatchReport match = match_spectra(predicted, sector_spec, cfg.threshold);
    double max_match = 0;
    for (const auto& p : match.matched) max_match = std::max(max_match, p.distance);

    const bool pass = max_residual <= cfg.threshold;
    out.report["results"] = rows;
    out.report["summary"] = {{"verified_states", predicted.size()},
                             {"max_eigenpair_residual", max_residual},
                             {"max_energy_match_distance", max_match},
                             {"unmatched_predictions", match.unmatched_predictions.size()},
                             {"sector_coverage", match.coverage},
                             {"threshold", cfg.threshold},
                             {"pass", pass}};
    out.exit_code = pass ? kExitOk : kExitVerifyFailure;
    return out;
}

CommandResult cmd_scan_constraints(const RunConfig& cfg) {
    check_family(cfg.family);
    if (cfg.family != "xxz-open") throw UsageError("scan-constraints requires --family xxz-open");
    if (cfg.L < 2) throw UsageError("L must be >= 2");
    if (std::abs(cfg.Q) < kPoleTolerance) throw UsageError("scan-constraints requires Q != 0");

    XxzParams p;
    p.Q = cfg.Q;
    p.alpha = cfg.alpha;
    p.beta = cfg.beta;
    p.gamma = cfg.gamma;
    p.delta = cfg.delta;
    p.s = cfg.s;
    p.L = cfg.L;
    const auto triplets = constraint_defects(p);

    CommandResult out;
    out.report["config"] = config_echo(cfg);
    nlohmann::json rows = nlohmann::json::array();
    int satisfied = 0, errors = 0;
    for (const auto& t : triplets) {
        nlohmann::json row;
        row["n"] = t.n;
        row["eps"] = t.eps > 0 ? "+" : "-";
        row["eps_prime"] = t.eps_prime > 0 ? "+" : "-";
        if (t.error) {
            row["error"] = t.error_message;
            ++errors;
        } else {
            row["defect"] = complex_json(t.defect);
            row["abs_defect"] = std::abs(t.defect);
            row["satisfied"] = t.satisfied;
            row["error"] = "";
            if (t.satisfied) ++satisfied;
        }
        rows.push_back(row);
    }
    out.report["results"] = rows;
    out.report["summary"] = {{"rows", rows.size()}, {"satisfied", satisfied}, {"errors", errors}};
    return out;
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string csv_complex(const nlohmann::json& arr) {
    return fmt_double(arr[0].get<double>()) + "," + fmt_double(arr[1].get<double>());
}

std::string csv_momenta(const nlohmann::json& arr) {
    std::string out;
    for (const auto& c : arr) {
        if (!out.empty()) out += ';';
        out += fmt_double(c[0].get<double>()) + ":" + fmt_double(c[1].get<double>());
    }
    return out;
}

}  // namespace

std::string to_csv(const std::string& command, const nlohmann::json& report) {
    std::ostringstream os;
    const auto& rows = report.at("results");
    if (command == "spectrum") {
        os << "index,eigenvalue_re,eigenvalue_im\n";
        for (const auto& r : rows)
            os << r["index"].get<std::size_t>() << "," << csv_complex(r["eigenvalue"]) << "\n";
    } else if (command == "solve" || command == "verify") {
        os << "index,converged,filtered,residual_norm,iterations,energy_re,energy_im,momenta";
        if (command == "verify") os << ",eigenpair_residual";
        os << "\n";
        for (const auto& r : rows) {
            os << r["index"].get<int>() << "," << (r["converged"].get<bool>() ? 1 : 0) << ","
               << "\"" << r["filtered"].get<std::string>() << "\","
               << fmt_double(r["residual_norm"].get<double>()) << ","
               << r["iterations"].get<int>() << "," << csv_complex(r["energy"]) << ","
               << csv_momenta(r["momenta"]);
            if (command == "verify") {
                os << ",";
                if (r.contains("eigenpair_residual"))
                    os << fmt_double(r["eigenpair_residual"].get<double>());
            }
            os << "\n";
        }
    } else if (command == "scan-constraints") {
        os << "n,eps,eps_prime,defect_re,defect_im,abs_defect,satisfied,error\n";
        for (const auto& r : rows) {
            os << r["n"].get<int>() << "," << r["eps"].get<std::string>() << ","
               << r["eps_prime"].get<std::string>() << ",";
            if (r.contains("defect")) {
                os << csv_complex(r["defect"]) << "," << fmt_double(r["abs_defect"].get<double>())
                   << "," << (r["satisfied"].get<bool>() ? 1 : 0);
            } else {
                os << ",,,";
            }
            os << ",\"" << r["error"].get<std::string>() << "\"\n";
        }
    } else {
        throw UsageError("no CSV schema for command '" + command + "'");
    }
    return os.str();
}

}  // namespace spinchain
