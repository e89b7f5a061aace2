#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "srgm/cli.hpp"
#include "srgm/decision.hpp"
#include "srgm/error.hpp"
#include "srgm/io.hpp"
#include "srgm/metrics.hpp"
#include "srgm/priority_net.hpp"
#include "srgm/release.hpp"

namespace srgm::cli {
namespace {

using io::Json;

struct Input {
    std::string path;
    std::string bytes;
};

Input load(const std::string& path) { return {path, io::read_file(path)}; }

Json parse_json(const Input& in) {
    try {
        return Json::parse(in.bytes);
    } catch (const Json::parse_error& e) {
        throw InputError(in.path + ": invalid JSON: " + e.what());
    }
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
    if (path) {
        io::write_file(*path, content);
    } else {
        out << content;
    }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string curve_path_for(const OptimizeArgs& args) {
    if (args.curve_csv) return *args.curve_csv;
    if (!args.out) return {};
    const std::string& out = *args.out;
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? out.substr(0, dot) : out) + ".curve.csv";
}

ModelParams fitted_model(const Json& j, const std::string& source) {
    if (j.contains("converged") && j.at("converged").is_boolean() && !j.at("converged").get<bool>()) {
        throw InputError(source + ": fit did not converge; refusing to optimize on it");
    }
    try {
        return io::model_from_json(j);
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    }
}

Json policy_json(const ReleasePolicy& p) {
    return {{"case", std::string(to_string(p.policy_case))},
            {"t_star", p.t_star},
            {"t0", optional_number(p.t0)},
            {"expected_cost_at_t_star", p.expected_cost_at_t_star}};
}

}  // namespace

int cmd_fit(const FitArgs& args, std::ostream& out) {
    const Input csv = load(args.faults_csv);
    const ModelKind kind = parse_model_kind(args.model);
    const FaultDataset data = io::parse_fault_csv(csv.bytes, csv.path, args.time_unit);
    if (data.size() < 3) throw InputError(csv.path + ": fitting requires at least 3 observations");
    if (data.total_faults() == 0) throw InputError(csv.path + ": no faults observed");

    const FitResult fit = fit_model(data, kind);

    Json j = io::model_to_json(fit.params);
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["best_start"] = fit.best_start;
    j["log_likelihood"] = fit.log_likelihood;
    j["dataset"] = {{"checksum", io::checksum(csv.bytes)},
                    {"observations", data.size()},
                    {"total_faults", data.total_faults()},
                    {"last_time", data.last_time()},
                    {"time_unit", data.time_unit()}};
    emit(args.out, io::dump(j), out);
    return fit.converged ? kSuccess : kNotConverged;
}

int cmd_optimize(const OptimizeArgs& args, std::ostream& out) {
    const Input cfg_in = load(args.config);
    const io::ProjectConfig config = io::parse_config(cfg_in.bytes, cfg_in.path);
    const Input fit_in = load(args.fit_json);
    const ModelParams current = fitted_model(parse_json(fit_in), fit_in.path);
    if (config.current_model && *config.current_model != kind_of(current)) {
        throw InputError(fit_in.path + ": fitted model '" + std::string(to_string(kind_of(current))) +
                         "' differs from config models.current");
    }
    std::optional<Input> prev_in;
    PreviousVersion previous;
    if (args.prev_fit_json) {
        prev_in = load(*args.prev_fit_json);
        previous = fitted_model(parse_json(*prev_in), prev_in->path);
        if (config.previous_model && *config.previous_model != kind_of(*previous)) {
            throw InputError(prev_in->path + ": previous model differs from config models.previous");
        }
    }
    const CostParams& costs = config.costs;
    const double ratio = cost_ratio(costs);

    // With c4 == c2 the previous-version term has a zero coefficient and the
    // cost is exactly the single-version one.
    const bool prev_term = previous.has_value() && costs.c4 != costs.c2;
    const auto* go = std::get_if<GoParams>(&current);
    ReleasePolicy policy;
    std::string method;
    if (go != nullptr && !prev_term) {
        policy = optimal_release_time(*go, costs);
        method = "closed_form";
    } else {
        policy = optimize_release_numeric(make_cost_function(current, previous, costs, prev_term),
                                          costs.lifecycle_t);
        method = "numeric";
    }
    const CostCurve curve =
        cost_curve(make_cost_function(current, previous, costs, prev_term), costs.lifecycle_t);

    const std::string curve_path = curve_path_for(args);
    Json j = policy_json(policy);
    j["method"] = method;
    j["cost_ratio"] = ratio;
    j["model"] = io::model_to_json(current);
    j["previous_model"] = previous ? io::model_to_json(*previous) : Json(nullptr);
    j["multiversion"] = previous.has_value();
    j["previous_term_vanishes"] = previous.has_value() && !prev_term;
    j["costs"] = {{"c1", costs.c1}, {"c2", costs.c2}, {"c3", costs.c3}, {"c4", costs.c4},
                  {"lifecycle_t", costs.lifecycle_t}};
    j["cost_curve"] =
        curve_path.empty() ? Json(nullptr) : Json(curve_path.substr(curve_path.find_last_of('/') + 1));
    j["inputs"] = {{"config", io::checksum(cfg_in.bytes)},
                   {"fit", io::checksum(fit_in.bytes)},
                   {"prev_fit", prev_in ? Json(io::checksum(prev_in->bytes)) : Json(nullptr)}};

    std::string csv = "T,cost\n";
    for (std::size_t i = 0; i < curve.release_times.size(); ++i) {
        csv += io::format_number(curve.release_times[i]) + "," + io::format_number(curve.costs[i]) + "\n";
    }
    if (!curve_path.empty()) io::write_file(curve_path, csv);
    emit(args.out, io::dump(j), out);
    return kSuccess;
}

namespace {

NetworkWeights weights_from_json(const Json& j, const std::string& source) {
    try {
        NetworkWeights w;
        w.inputs = j.at("inputs").get<std::size_t>();
        w.hidden = j.at("hidden").get<std::size_t>();
        w.outputs = j.at("outputs").get<std::size_t>();
        w.w1 = j.at("w1").get<std::vector<double>>();
        w.w2 = j.at("w2").get<std::vector<double>>();
        w.theta = j.at("theta").get<double>();
        w.seed = j.value("seed", std::uint64_t{0});
        w.validate();
        return w;
    } catch (const Json::exception& e) {
        throw InputError(source + ": malformed network weights: " + e.what());
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    }
}

// Weights keep full precision so reruns reproduce the forward pass exactly.
std::string weights_to_json(const NetworkWeights& w) {
    Json j{{"inputs", w.inputs}, {"hidden", w.hidden}, {"outputs", w.outputs},
           {"w1", w.w1},         {"w2", w.w2},         {"theta", w.theta},
           {"seed", w.seed}};
    return j.dump(2) + "\n";
}

std::vector<double> scale_targets(const std::vector<double>& density) {
    const auto [lo, hi] = std::minmax_element(density.begin(), density.end());
    std::vector<double> d(density.size(), 0.5);
    if (*hi > *lo) {
        for (std::size_t k = 0; k < density.size(); ++k) {
            d[k] = 0.1 + 0.8 * (density[k] - *lo) / (*hi - *lo);
        }
    }
    return d;
}

}  // namespace

int cmd_prioritize(const PrioritizeArgs& args, std::ostream& out) {
    const Input cfg_in = load(args.config);
    const io::ProjectConfig config = io::parse_config(cfg_in.bytes, cfg_in.path);
    const Input metrics_in = load(args.metrics_csv);
    const std::vector<ModuleRecord> modules = io::parse_metrics_csv(metrics_in.bytes, metrics_in.path);

    std::vector<ModuleNode> graph;
    for (const auto& m : modules) graph.push_back({m.id, m.depends_on, m.tested});
    check_dependency_graph(graph);

    const FeatureRanges ranges = project_ranges(modules);
    std::vector<RawFeatures> features;
    std::vector<double> flat;
    for (const auto& m : modules) {
        features.push_back(feature_vector(m, ranges));
        flat.insert(flat.end(), features.back().begin(), features.back().end());
    }
    const std::size_t with_history = static_cast<std::size_t>(std::count_if(
        modules.begin(), modules.end(), [](const auto& m) { return m.historical_faults.has_value(); }));
    if (with_history != 0 && with_history != modules.size()) {
        throw InputError(metrics_in.path +
                         ": historical_faults must be given for every module or for none");
    }
    std::optional<Input> weights_in;
    std::optional<NetworkWeights> supplied;
    if (args.weights_json) {
        weights_in = load(*args.weights_json);
        supplied = weights_from_json(parse_json(*weights_in), weights_in->path);
        if (supplied->inputs != flat.size() || supplied->outputs != modules.size()) {
            throw InputError(weights_in->path + ": network shape does not match the project (" +
                             std::to_string(flat.size()) + " inputs, " +
                             std::to_string(modules.size()) + " outputs expected)");
        }
    }

    std::vector<double> response;
    std::string method;
    Json training = nullptr;
    std::optional<NetworkWeights> used;
    if (supplied) {
        response = forward(*supplied, flat).output;
        method = "network_supplied_weights";
        used = supplied;
    } else if (with_history == modules.size()) {
        std::vector<double> density;
        for (const auto& m : modules) density.push_back(*m.historical_faults / m.lloc);
        const TrainingSet data{{flat, scale_targets(density)}};
        const auto init = NetworkWeights::random(flat.size(), config.network.hidden, modules.size(),
                                                 config.network.theta,
                                                 args.seed.value_or(config.network.seed));
        const TrainResult trained = train_backprop(
            init, data, {config.network.learning_rate, config.network.epochs});
        response = forward(trained.weights, flat).output;
        method = "network_trained";
        training = {{"epochs", config.network.epochs},
                    {"learning_rate", config.network.learning_rate},
                    {"initial_loss", trained.loss_history.empty() ? trained.final_loss
                                                                  : trained.loss_history.front()},
                    {"final_loss", trained.final_loss},
                    {"targets", data.front().d}};
        used = trained.weights;
    } else {
        for (const auto& m : modules) response.push_back(m.weight_priority_score);
        method = "weight_priority_bypass";
    }

    const ImportanceVector importance = importance_weights(response);
    std::vector<ModuleWeight> weights;
    for (std::size_t k = 0; k < modules.size(); ++k) weights.push_back({modules[k].id, importance.p[k]});
    const auto assignments = categorize(weights, graph, config.thresholds);

    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < modules.size(); ++k) index[modules[k].id] = k;
    Json rows = Json::array();
    bool any_tie = false;
    for (const auto& a : assignments) {
        const std::size_t k = index.at(a.module_id);
        any_tie = any_tie || a.tie;
        rows.push_back({{"id", a.module_id},
                        {"name", modules[k].name},
                        {"p_k", a.p_k},
                        {"response", response[k]},
                        {"category", std::string(to_string(a.category))},
                        {"base_category", std::string(to_string(a.base_category))},
                        {"boosted", a.boosted},
                        {"tie", a.tie},
                        {"features", features[k]}});
    }
    double sum = 0.0;
    for (double p : importance.p) sum += p;

    Json j{{"method", method},
           {"degenerate", importance.degenerate},
           {"manual_review", any_tie},
           {"modules", rows},
           {"sum_p", sum},
           {"training", training},
           {"feature_order", feature_names()},
           {"inputs",
            {{"config", io::checksum(cfg_in.bytes)},
             {"metrics", io::checksum(metrics_in.bytes)},
             {"weights", weights_in ? Json(io::checksum(weights_in->bytes)) : Json(nullptr)}}}};
    if (args.save_weights) {
        if (!used) throw InputError("--save-weights requires a network run (historical_faults or --weights)");
        io::write_file(*args.save_weights, weights_to_json(*used));
    }
    emit(args.out, io::dump(j), out);
    return kSuccess;
}

int cmd_decide(const DecideArgs& args, std::ostream& out) {
    const Input cfg_in = load(args.config);
    const io::ProjectConfig config = io::parse_config(cfg_in.bytes, cfg_in.path);
    const Input policy_in = load(args.policy_json);
    const Json pj = parse_json(policy_in);
    ReleasePolicy policy;
    try {
        policy.policy_case = parse_policy_case(pj.at("case").get<std::string>());
        policy.t_star = pj.at("t_star").get<double>();
        policy.expected_cost_at_t_star = pj.at("expected_cost_at_t_star").get<double>();
    } catch (const Json::exception& e) {
        throw InputError(policy_in.path + ": malformed policy: " + e.what());
    }
    const Input actuals_in = load(args.actuals_csv);
    const auto actuals = io::parse_actuals_csv(actuals_in.bytes, actuals_in.path, config.fault_tolerance);

    Json j{{"policy",
            {{"case", std::string(to_string(policy.policy_case))},
             {"t_star", policy.t_star},
             {"expected_cost_at_t_star", policy.expected_cost_at_t_star}}},
           {"settings",
            {{"stringency", config.stringency},
             {"cost_odds", config.cost_odds},
             {"stringency_mode", std::string(to_string(config.stringency_mode))},
             {"delta_kind", std::string(to_string(config.delta_kind))}}},
           {"inputs",
            {{"config", io::checksum(cfg_in.bytes)},
             {"policy", io::checksum(policy_in.bytes)},
             {"actuals", io::checksum(actuals_in.bytes)}}}};

    if (policy.policy_case == PolicyCase::no_testing || !(policy.t_star > 0.0)) {
        j["status"] = "no_testing_policy";
        j["message"] = "optimal policy is not to test (T* = 0); time deviation is undefined";
        j["overall"] = nullptr;
        j["triggering_category"] = nullptr;
        j["categories"] = Json::array();
        j["cumulative_trail"] = Json::array();
        emit(args.out, io::dump(j), out);
        return kSuccess;
    }
    if (!(policy.expected_cost_at_t_star > 0.0)) {
        throw InputError(policy_in.path + ": optimal cost must be positive");
    }

    const DecisionReport report = decide(
        policy, actuals,
        {config.stringency, config.cost_odds, config.stringency_mode, config.delta_kind});

    Json cats = Json::array();
    Json trail = Json::array();
    std::map<Category, const CategoryActuals*> by_cat;
    for (const auto& a : actuals) by_cat[a.category] = &a;
    for (const auto& d : report.decisions) {
        const auto& o = by_cat.at(d.category)->outcome;
        cats.push_back({{"category", std::string(to_string(d.category))},
                        {"actual_time", o.actual_time},
                        {"actual_cost", o.actual_cost},
                        {"faults_found", o.faults_found},
                        {"faults_tolerated", o.faults_tolerated},
                        {"alpha", d.alpha},
                        {"beta", d.beta},
                        {"delta", d.delta},
                        {"weighted_delta", d.weighted_delta},
                        {"cumulative_delta", d.cumulative_delta},
                        {"checked_delta", d.checked_delta},
                        {"recommendation", std::string(to_string(d.recommendation))}});
        trail.push_back(d.cumulative_delta);
    }
    j["status"] = "evaluated";
    j["overall"] = std::string(to_string(report.overall));
    j["triggering_category"] = report.triggering_category
                                   ? Json(std::string(to_string(*report.triggering_category)))
                                   : Json(nullptr);
    j["categories"] = cats;
    j["cumulative_trail"] = trail;
    emit(args.out, io::dump(j), out);
    return kSuccess;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    const Input params_in = load(args.params_json);
    ModelParams model;
    try {
        model = io::model_from_json(parse_json(params_in));
    } catch (const InputError& e) {
        throw InputError(params_in.path + ": " + e.what());
    } catch (const Json::exception& e) {
        throw InputError(params_in.path + ": " + e.what());
    }
    if (!(args.horizon > 0.0) || !std::isfinite(args.horizon)) {
        throw InputError("--horizon must be positive and finite");
    }
    const auto events = simulate_nhpp(model, args.horizon, args.seed);
    std::string csv = "time\n";
    for (double t : events) csv += io::format_number(t) + "\n";
    emit(args.out, csv, out);
    return kSuccess;
}

}  // namespace srgm::cli
