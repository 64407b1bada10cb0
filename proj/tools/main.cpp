#include <qsc/runlog.hpp>
#include <qsc/verify.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

struct GlobalOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> duration;
};

qsc::Scenario load_with_overrides(const std::string& path, const GlobalOverrides& g) {
    qsc::Scenario sc = qsc::load_scenario_file(path);
    if (g.seed) sc.seed = *g.seed;
    if (g.dt) sc.dt = *g.dt;
    if (g.duration) sc.duration = *g.duration;
    return sc;
}

// File stem for a run, unique within one invocation.
std::string output_stem(const std::string& name, std::set<std::string>& used) {
    std::string stem = name.empty() ? "scenario" : name;
    for (char& c : stem) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
    }
    std::string candidate = stem;
    for (int i = 2; !used.insert(candidate).second; ++i) {
        candidate = stem + "_" + std::to_string(i);
    }
    return candidate;
}

void print_metrics(const qsc::Metrics& m) {
    std::printf("%s: settling %.3f s, peak |M| %.3f, integral %.3f, "
                "unwinding ratio %.4f, switches %ld\n",
                m.name.c_str(), m.settling_time, m.peak_torque, m.torque_integral,
                m.unwinding_ratio, m.switch_count);
}

int run_simulate(const std::string& config, const std::string& out_dir,
                 const GlobalOverrides& g) {
    const qsc::Scenario sc = load_with_overrides(config, g);
    const qsc::RunLog log = qsc::run_scenario(sc);
    const qsc::Metrics metrics = qsc::compute_metrics(log);

    std::filesystem::create_directories(out_dir);
    std::set<std::string> used;
    const std::string stem = output_stem(sc.name, used);
    qsc::emit_csv(log, out_dir + "/" + stem + ".csv");
    qsc::emit_metrics_csv({metrics}, out_dir + "/" + stem + "_metrics.csv");
    print_metrics(metrics);
    return 0;
}

int run_compare(const std::vector<std::string>& configs, const std::string& out_dir,
                const GlobalOverrides& g) {
    std::filesystem::create_directories(out_dir);
    std::vector<qsc::Metrics> all;
    std::set<std::string> used;
    for (const std::string& path : configs) {
        const qsc::Scenario sc = load_with_overrides(path, g);
        const qsc::RunLog log = qsc::run_scenario(sc);
        qsc::emit_csv(log, out_dir + "/" + output_stem(sc.name, used) + ".csv");
        all.push_back(qsc::compute_metrics(log));
        print_metrics(all.back());
    }
    qsc::emit_metrics_csv(all, out_dir + "/metrics.csv");
    return 0;
}

int run_verify(bool as_json) {
    const qsc::VerifyReport report = qsc::verify();
    if (as_json) {
        std::cout << qsc::to_json(report) << "\n";
    } else {
        for (const auto& c : report.checks) {
            std::printf("[%s] %-28s value %.3e, accepted [%g, %g]  (%s)\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.lo, c.hi,
                        c.detail.c_str());
        }
    }
    return report.all_pass() ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternion sliding-mode attitude control simulator"};
    app.require_subcommand(1);

    GlobalOverrides g;
    app.add_option("--seed", g.seed, "Override the scenario seed");
    app.add_option("--dt", g.dt, "Override the integration step, seconds");
    app.add_option("--duration", g.duration, "Override the run duration, seconds");

    std::string sim_config, sim_out;
    CLI::App* sim = app.add_subcommand("simulate", "Run one scenario and write CSV outputs");
    sim->fallthrough();
    sim->add_option("--config", sim_config, "Scenario config file")->required();
    sim->add_option("--out", sim_out, "Output directory")->required();

    std::vector<std::string> cmp_configs;
    std::string cmp_out;
    CLI::App* cmp = app.add_subcommand("compare", "Run several scenarios into one metrics table");
    cmp->fallthrough();
    cmp->add_option("--configs", cmp_configs, "Scenario config files")
        ->required()
        ->expected(-1);
    cmp->add_option("--out", cmp_out, "Output directory")->required();

    bool verify_json = false;
    CLI::App* ver = app.add_subcommand("verify", "Run the numerical oracle suite");
    ver->add_flag("--json", verify_json, "Emit the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_config, sim_out, g);
        if (cmp->parsed()) return run_compare(cmp_configs, cmp_out, g);
        if (ver->parsed()) return run_verify(verify_json);
    } catch (const qsc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsc::DivergenceError& e) {
        std::cerr << "divergence at t=" << e.t() << " (step " << e.step() << "): " << e.what()
                  << "\n";
        return 3;
    } catch (const qsc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
