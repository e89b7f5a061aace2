#include <algorithm>
#include <exception>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srgm/cli.hpp"
#include "srgm/error.hpp"
#include "srgm/nhpp.hpp"

namespace srgm::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Release-time optimization and test prioritization from fault data", "srgm"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit an NHPP reliability model to grouped fault data");
    fit_cmd->add_option("faults", fit.faults_csv, "CSV with columns time,cumulative_faults")->required();
    fit_cmd->add_option("--model", fit.model, "go | ohba | mo")->capture_default_str();
    fit_cmd->add_option("--time-unit", fit.time_unit, "Label recorded with the data")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Output JSON path (default stdout)");
    fit_cmd->add_option("--config", "Accepted for uniformity; unused");
    fit_cmd->add_option("--seed", "Accepted for uniformity; unused");

    OptimizeArgs opt;
    auto* opt_cmd = app.add_subcommand("optimize", "Optimal release time from a fitted model");
    opt_cmd->add_option("fit", opt.fit_json, "JSON produced by `srgm fit`")->required();
    opt_cmd->add_option("--config", opt.config, "Project config JSON")->required();
    opt_cmd->add_option("--prev", opt.prev_fit_json, "Fitted model of the previous version");
    opt_cmd->add_option("--out", opt.out, "Output JSON path (default stdout)");
    opt_cmd->add_option("--curve", opt.curve_csv, "Cost curve CSV (default <out>.curve.csv)");
    std::string ignored_model;
    opt_cmd->add_option("--model", ignored_model, "Expected model kind of the fit");

    PrioritizeArgs pri;
    auto* pri_cmd = app.add_subcommand("prioritize", "Module importance weights and priority categories");
    pri_cmd->add_option("metrics", pri.metrics_csv, "Module metrics CSV")->required();
    pri_cmd->add_option("--config", pri.config, "Project config JSON")->required();
    pri_cmd->add_option("--weights", pri.weights_json, "Pre-trained network weights JSON");
    pri_cmd->add_option("--save-weights", pri.save_weights, "Write the network weights used");
    pri_cmd->add_option("--out", pri.out, "Output JSON path (default stdout)");
    std::optional<std::uint64_t> pri_seed;
    pri_cmd->add_option("--seed", pri_seed, "Override the network initialization seed");

    DecideArgs dec;
    auto* dec_cmd = app.add_subcommand("decide", "Release recommendation from test actuals");
    dec_cmd->add_option("policy", dec.policy_json, "JSON produced by `srgm optimize`")->required();
    dec_cmd->add_option("actuals", dec.actuals_csv, "Per-category test actuals CSV")->required();
    dec_cmd->add_option("--config", dec.config, "Project config JSON")->required();
    dec_cmd->add_option("--out", dec.out, "Output JSON path (default stdout)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Sample failure times from an NHPP by thinning");
    sim_cmd->add_option("params", sim.params_json, "Model JSON (as written by `srgm fit`)")->required();
    sim_cmd->add_option("--horizon", sim.horizon, "Simulation horizon")->required();
    sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Output CSV path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "srgm: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(fit, out);
        if (opt_cmd->parsed()) {
            if (!ignored_model.empty()) parse_model_kind(ignored_model);
            return cmd_optimize(opt, out);
        }
        if (pri_cmd->parsed()) {
            if (pri_seed) pri.seed = pri_seed;
            return cmd_prioritize(pri, out);
        }
        if (dec_cmd->parsed()) return cmd_decide(dec, out);
        if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    } catch (const InputError& e) {
        err << "srgm: input error: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "srgm: input error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericError& e) {
        err << "srgm: numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const DomainError& e) {
        err << "srgm: numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const std::exception& e) {
        err << "srgm: error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace srgm::cli
