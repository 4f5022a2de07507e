// Command-line front end: single counting runs, invariant validation, and
// cost-scaling sweeps. Exit codes: 0 success, 1 I/O failure, 2 guard or
// parameter violation (also any failed validation suite).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "aqc/database.hpp"
#include "aqc/report.hpp"
#include "aqc/scheduler.hpp"
#include "aqc/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitGuard = 2;

struct CountOptions {
    std::string instance;
    int m = 4;
    std::string mode = "closed_form";
    std::uint64_t seed = 1;
    double c_omega = 0.05;
    double delta = 0.22;
    double failure_prob = 0.1;
    std::string out = ".";
};

// flat key=value file; keys match the long flag names. Values apply only to
// options not already set on the command line.
void apply_config_file(const std::string& path, const CLI::App& cmd, CountOptions& opt) {
    std::ifstream in(path);
    if (!in) throw aqc::IoError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw aqc::IoError("config line " + std::to_string(lineno) + " is not key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const bool overridden = cmd.count("--" + key) > 0;
        if (overridden) continue;
        try {
            if (key == "instance") opt.instance = value;
            else if (key == "m") opt.m = std::stoi(value);
            else if (key == "mode") opt.mode = value;
            else if (key == "seed") opt.seed = std::stoull(value);
            else if (key == "c-omega") opt.c_omega = std::stod(value);
            else if (key == "delta") opt.delta = std::stod(value);
            else if (key == "failure-prob") opt.failure_prob = std::stod(value);
            else if (key == "out") opt.out = value;
            else throw aqc::IoError("unknown config key '" + key + "'");
        } catch (const std::logic_error&) {
            throw aqc::IoError("config line " + std::to_string(lineno) + ": bad value for '" +
                               key + "'");
        }
    }
    if (opt.instance.empty()) throw aqc::IoError("no instance file given (flag or config)");
}

int cmd_count(const CountOptions& opt) {
    const aqc::MarkedDatabase db = aqc::load_instance(opt.instance);

    aqc::RunParams params;
    params.c_omega = opt.c_omega;
    params.delta = opt.delta;
    params.failure_prob = opt.failure_prob;
    const aqc::CountingResult result =
        aqc::run_counting(db, opt.m, aqc::engine_mode_from_string(opt.mode), opt.seed, params);

    std::filesystem::create_directories(opt.out);
    {
        std::ofstream json_out(std::filesystem::path(opt.out) / "result.json");
        if (!json_out) throw aqc::IoError("cannot write result.json under " + opt.out);
        json_out << aqc::to_json(result).dump(2) << '\n';
    }
    {
        std::ofstream jsonl_out(std::filesystem::path(opt.out) / "stages.jsonl");
        if (!jsonl_out) throw aqc::IoError("cannot write stages.jsonl under " + opt.out);
        aqc::write_stage_records_jsonl(jsonl_out, result);
    }
    std::cout << "alpha_hat = " << result.alpha_hat.numerator << "/"
              << result.alpha_hat.denominator << " = " << result.alpha_hat.value()
              << "  (m = " << result.alpha_hat.m << ", epsilon = " << result.alpha_hat.epsilon
              << ", T_total = " << result.ledger.total << ")\n";
    return kExitOk;
}

int cmd_validate(const std::string& level) {
    const aqc::ValidateLevel lv =
        (level == "full") ? aqc::ValidateLevel::full : aqc::ValidateLevel::fast;
    const auto results = aqc::run_validation(lv);
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.passed) std::cout << " — " << r.detail;
        std::cout << '\n';
        all_ok = all_ok && r.passed;
    }
    return all_ok ? kExitOk : kExitGuard;
}

int cmd_scaling(int m_lo, int m_hi, double c_omega, const std::string& out) {
    const aqc::ScalingCurve curve = aqc::scaling_curve(m_lo, m_hi, c_omega);
    std::filesystem::create_directories(out);
    std::ofstream csv(std::filesystem::path(out) / "scaling.csv");
    if (!csv) throw aqc::IoError("cannot write scaling.csv under " + out);
    aqc::write_scaling_csv(csv, curve);
    std::cout << "slope = " << curve.slope << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adiabatic counting simulator"};
    app.require_subcommand(1);

    CountOptions count_opt;
    std::string config_path;
    auto* count = app.add_subcommand("count", "run one counting experiment");
    count->add_option("--config", config_path, "flat key=value configuration file; flags override");
    count->add_option("--instance", count_opt.instance, "instance file (n=..., marked=...)");
    count->add_option("--m", count_opt.m, "number of precision stages");
    count->add_option("--mode", count_opt.mode, "closed_form | integrate_2d | full");
    count->add_option("--seed", count_opt.seed, "top-level sampling seed");
    count->add_option("--c-omega", count_opt.c_omega, "sweep-rate constant");
    count->add_option("--delta", count_opt.delta, "probability-estimate tolerance");
    count->add_option("--failure-prob", count_opt.failure_prob, "total failure budget");
    count->add_option("--out", count_opt.out, "output directory");

    std::string level = "fast";
    auto* validate = app.add_subcommand("validate", "run the invariant suites");
    validate->add_option("--level", level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));

    int m_lo = 4, m_hi = 12;
    double scaling_c_omega = 0.05;
    std::string scaling_out = ".";
    auto* scaling = app.add_subcommand("scaling", "sweep the total-cost curve");
    scaling->add_option("--m-lo", m_lo, "lowest precision exponent");
    scaling->add_option("--m-hi", m_hi, "highest precision exponent");
    scaling->add_option("--c-omega", scaling_c_omega, "sweep-rate constant");
    scaling->add_option("--out", scaling_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (count->parsed()) {
            if (!config_path.empty()) apply_config_file(config_path, *count, count_opt);
            if (count_opt.instance.empty()) {
                std::cerr << "error: --instance is required (flag or config file)\n";
                return kExitGuard;
            }
            return cmd_count(count_opt);
        }
        if (validate->parsed()) return cmd_validate(level);
        if (scaling->parsed()) return cmd_scaling(m_lo, m_hi, scaling_c_omega, scaling_out);
    } catch (const aqc::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const aqc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
