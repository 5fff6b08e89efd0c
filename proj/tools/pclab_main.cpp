#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pclab/errors.hpp"
#include "pclab/runner.hpp"
#include "pclab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pclab: certified checks for pseudo-convergent prefixes and their stage algebras"};
    app.require_subcommand(1);

    std::string scenario_arg;
    long prec_flag = 0;
    std::string report_path;
    auto* run_cmd = app.add_subcommand("run", "run a scenario's checks and print the summary");
    run_cmd->add_option("scenario", scenario_arg, "built-in scenario name or path to a JSON file")
        ->required();
    auto* prec_opt = run_cmd->add_option("--precision", prec_flag,
                                         "override the working precision (else PCLAB_PRECISION, "
                                         "else the scenario's x_precision)");
    run_cmd->add_option("--report", report_path, "write the JSON report to this file");

    auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");

    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "recheck an emitted report arithmetically");
    verify_cmd->add_option("report", verify_path, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& name : pclab::builtin_scenario_names()) std::cout << name << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            const pclab::Scenario sc = pclab::load_scenario(scenario_arg);
            std::optional<long> override_prec;
            if (prec_opt->count() > 0) override_prec = prec_flag;
            const auto t0 = std::chrono::steady_clock::now();
            const pclab::RunResult res = pclab::run_scenario(sc, override_prec);
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            std::cout << res.summary;
            std::cout << "elapsed: " << ms << " ms\n";
            if (!report_path.empty()) {
                std::ofstream f(report_path);
                if (!f) throw pclab::config_error("cannot open report file for writing: " + report_path);
                f << res.report.dump(2) << "\n";
            }
            return res.exit_code;
        }
        if (verify_cmd->parsed()) {
            std::ifstream f(verify_path);
            if (!f) throw pclab::config_error("cannot read report file: " + verify_path);
            nlohmann::json rep;
            try {
                rep = nlohmann::json::parse(f);
            } catch (const nlohmann::json::parse_error& e) {
                throw pclab::config_error("report is not valid JSON: " + std::string(e.what()));
            }
            const pclab::VerifyResult vr = pclab::verify_report(rep);
            std::cout << vr.log;
            std::cout << (vr.ok ? "verification: OK" : "verification: MISMATCH") << "\n";
            return vr.ok ? 0 : 1;
        }
    } catch (const pclab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
