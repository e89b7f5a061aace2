#include "srgm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "srgm/error.hpp"

namespace srgm::io {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view cell, std::string_view source, std::size_t line,
                 std::string_view column) {
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        fail(source, line, "column '" + std::string(column) + "': not a finite number: '" +
                               std::string(cell) + "'");
    }
    return v;
}

std::uint64_t to_uint(std::string_view cell, std::string_view source, std::size_t line,
                      std::string_view column) {
    std::uint64_t v = 0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc{} || ptr != end) {
        fail(source, line, "column '" + std::string(column) +
                               "': not a nonnegative integer: '" + std::string(cell) + "'");
    }
    return v;
}

std::uint32_t to_u32(std::string_view cell, std::string_view source, std::size_t line,
                     std::string_view column) {
    const std::uint64_t v = to_uint(cell, source, line, column);
    if (v > 0xFFFFFFFFull) fail(source, line, "column '" + std::string(column) + "': too large");
    return static_cast<std::uint32_t>(v);
}

bool to_bool(std::string_view cell, std::string_view source, std::size_t line) {
    if (cell == "1" || cell == "true" || cell == "yes") return true;
    if (cell == "0" || cell == "false" || cell == "no" || cell.empty()) return false;
    fail(source, line, "column 'tested': expected 0/1/true/false, got '" + std::string(cell) + "'");
}

// Column lookup over one table.
class Columns {
public:
    Columns(const CsvTable& t, std::string_view source, const std::set<std::string>& known,
            const std::vector<std::string>& required)
        : source_(source) {
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (!known.count(t.header[i])) {
                fail(source, 1, "unknown column '" + t.header[i] + "'");
            }
            if (!index_.emplace(t.header[i], i).second) {
                fail(source, 1, "duplicate column '" + t.header[i] + "'");
            }
        }
        for (const auto& r : required) {
            if (!index_.count(r)) fail(source, 1, "missing required column '" + r + "'");
        }
    }

    bool has(const std::string& name) const { return index_.count(name) > 0; }

    std::string_view cell(const std::vector<std::string>& row, const std::string& name) const {
        const auto it = index_.find(name);
        return it == index_.end() ? std::string_view{} : std::string_view(row[it->second]);
    }

private:
    std::string_view source_;
    std::map<std::string, std::size_t> index_;
};

template <class T>
T json_get(const Json& j, const char* key, T fallback, std::string_view source) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw InputError(std::string(source) + ": key '" + key + "' has the wrong type");
    }
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view source) {
    CsvTable t;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool have_header = false;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const std::string_view line =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        const std::string_view content = trim(line);
        if (!content.empty() && content.front() != '#') {
            if (content.find('"') != std::string_view::npos) {
                fail(source, line_no, "quoted fields are not supported");
            }
            auto fields = split(content, ',');
            if (!have_header) {
                t.header = std::move(fields);
                have_header = true;
            } else {
                if (fields.size() != t.header.size()) {
                    fail(source, line_no,
                         "expected " + std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
                }
                t.rows.push_back(std::move(fields));
                t.line_numbers.push_back(line_no);
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (!have_header) throw InputError(std::string(source) + ": file is empty");
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("failed writing '" + path + "'");
}

std::string checksum(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double round_sig10(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
    return buf;
}

namespace {

void write_json(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    if (j.is_number_float()) {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_number(v) : "null";
    } else if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(k).dump() + ": ";
            write_json(v, indent + 2, out);
        }
        out += "\n" + close + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i != 0) out += ",\n";
            out += pad;
            write_json(j[i], indent + 2, out);
        }
        out += "\n" + close + "]";
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string dump(const Json& j) {
    std::string out;
    write_json(j, 0, out);
    return out + "\n";
}

FaultDataset parse_fault_csv(std::string_view text, std::string_view source, std::string time_unit) {
    const CsvTable t = parse_csv(text, source);
    const Columns cols(t, source, {"time", "cumulative_faults"}, {"time", "cumulative_faults"});
    std::vector<FaultObservation> obs;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto line = t.line_numbers[i];
        FaultObservation o{to_double(cols.cell(t.rows[i], "time"), source, line, "time"),
                           to_uint(cols.cell(t.rows[i], "cumulative_faults"), source, line,
                                   "cumulative_faults")};
        if (i == 0 && !(o.time > 0.0)) fail(source, line, "first observation time must be > 0");
        if (!obs.empty()) {
            if (!(o.time > obs.back().time)) fail(source, line, "times must be strictly increasing");
            if (o.cumulative_faults < obs.back().cumulative_faults) {
                fail(source, line, "cumulative_faults must be nondecreasing");
            }
        }
        obs.push_back(o);
    }
    if (obs.empty()) throw InputError(std::string(source) + ": no observations");
    return FaultDataset(std::move(obs), std::move(time_unit));
}

std::vector<ModuleRecord> parse_metrics_csv(std::string_view text, std::string_view source) {
    const CsvTable t = parse_csv(text, source);
    static const std::set<std::string> known{
        "id", "name", "depends_on", "procedure_ccs", "lloc", "di", "ci", "do", "co", "gd", "gc",
        "w", "r", "calib_k", "calib_a", "calib_b", "calib_c", "layout_transitions",
        "optimal_layout_cost", "mt", "fc", "fa", "fd", "production_hours",
        "programming_path_score", "size_score", "reporter_skill_score", "weight_priority_score",
        "reuse_fraction", "tested", "historical_faults"};
    const Columns cols(t, source, known, {"id", "procedure_ccs", "lloc"});

    std::vector<ModuleRecord> modules;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const auto line = t.line_numbers[i];
        auto num = [&](const char* c, double fallback) {
            const auto v = cols.cell(row, c);
            return v.empty() ? fallback : to_double(v, source, line, c);
        };
        auto count = [&](const char* c) {
            const auto v = cols.cell(row, c);
            return v.empty() ? std::uint32_t{0} : to_u32(v, source, line, c);
        };

        ModuleRecord m;
        m.id = std::string(cols.cell(row, "id"));
        if (m.id.empty()) fail(source, line, "module id is empty");
        if (!ids.insert(m.id).second) fail(source, line, "duplicate module id '" + m.id + "'");
        m.name = cols.has("name") && !cols.cell(row, "name").empty()
                     ? std::string(cols.cell(row, "name"))
                     : m.id;
        if (const auto deps = cols.cell(row, "depends_on"); !deps.empty()) {
            for (auto& d : split(deps, ';')) {
                if (!d.empty()) m.depends_on.push_back(std::move(d));
            }
        }
        for (const auto& cc : split(cols.cell(row, "procedure_ccs"), ';')) {
            m.procedure_ccs.push_back(to_u32(cc, source, line, "procedure_ccs"));
        }
        m.lloc = to_u32(cols.cell(row, "lloc"), source, line, "lloc");
        m.coupling = {count("di"), count("ci"), count("do"), count("co"),
                      count("gd"), count("gc"), count("w"),  count("r"),
                      num("calib_k", 1.0), num("calib_a", 1.0), num("calib_b", 1.0),
                      num("calib_c", 1.0)};

        const auto transitions = cols.cell(row, "layout_transitions");
        const auto optimal = cols.cell(row, "optimal_layout_cost");
        if (transitions.empty() != optimal.empty()) {
            fail(source, line, "layout_transitions and optimal_layout_cost must be given together");
        }
        if (!transitions.empty()) {
            LayoutInputs layout;
            for (const auto& pair : split(transitions, ';')) {
                const auto parts = split(pair, ':');
                if (parts.size() != 2) {
                    fail(source, line, "layout transition '" + pair + "' is not freq:cost");
                }
                layout.transitions.push_back({to_double(parts[0], source, line, "layout_transitions"),
                                              to_double(parts[1], source, line, "layout_transitions")});
            }
            layout.optimal_layout_cost = to_double(optimal, source, line, "optimal_layout_cost");
            m.layout = std::move(layout);
        }
        if (!cols.cell(row, "mt").empty()) {
            m.maintenance = MaintenanceCounts{count("mt"), count("fc"), count("fa"), count("fd")};
        } else if (!cols.cell(row, "fc").empty() || !cols.cell(row, "fa").empty() ||
                   !cols.cell(row, "fd").empty()) {
            fail(source, line, "maintenance counts need mt");
        }
        m.production_hours = num("production_hours", 0.0);
        m.programming_path_score = num("programming_path_score", 0.0);
        m.size_score = num("size_score", 0.0);
        m.reporter_skill_score = num("reporter_skill_score", 0.0);
        m.weight_priority_score = num("weight_priority_score", 0.0);
        m.reuse_fraction = num("reuse_fraction", 0.0);
        m.tested = to_bool(cols.cell(row, "tested"), source, line);
        if (const auto h = cols.cell(row, "historical_faults"); !h.empty()) {
            m.historical_faults = to_double(h, source, line, "historical_faults");
        }
        try {
            validate(m);
        } catch (const InputError& e) {
            fail(source, line, e.what());
        }
        modules.push_back(std::move(m));
    }
    if (modules.empty()) throw InputError(std::string(source) + ": no modules");
    return modules;
}

std::vector<CategoryActuals> parse_actuals_csv(
    std::string_view text, std::string_view source,
    const std::map<Category, std::uint64_t>& default_tolerance) {
    const CsvTable t = parse_csv(text, source);
    const Columns cols(t, source,
                       {"category", "actual_time", "actual_cost", "faults_found", "faults_tolerated"},
                       {"category", "actual_time", "actual_cost", "faults_found"});
    std::vector<CategoryActuals> out;
    std::set<Category> seen;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const auto line = t.line_numbers[i];
        CategoryActuals a;
        try {
            a.category = parse_category(cols.cell(row, "category"));
        } catch (const InputError& e) {
            fail(source, line, e.what());
        }
        if (!seen.insert(a.category).second) {
            fail(source, line, "duplicate category " + std::string(to_string(a.category)));
        }
        a.outcome.actual_time = to_double(cols.cell(row, "actual_time"), source, line, "actual_time");
        a.outcome.actual_cost = to_double(cols.cell(row, "actual_cost"), source, line, "actual_cost");
        if (a.outcome.actual_time < 0.0 || a.outcome.actual_cost < 0.0) {
            fail(source, line, "actual time and cost must be nonnegative");
        }
        a.outcome.faults_found = to_uint(cols.cell(row, "faults_found"), source, line, "faults_found");
        const auto tol = cols.cell(row, "faults_tolerated");
        if (tol.empty()) {
            const auto it = default_tolerance.find(a.category);
            a.outcome.faults_tolerated = it == default_tolerance.end() ? 0 : it->second;
        } else {
            a.outcome.faults_tolerated = to_uint(tol, source, line, "faults_tolerated");
        }
        out.push_back(a);
    }
    if (out.empty()) throw InputError(std::string(source) + ": no category rows");
    return out;
}

Json model_to_json(const ModelParams& p) {
    Json params;
    if (const auto* go = std::get_if<GoParams>(&p)) {
        params = {{"a", go->a}, {"b", go->b}};
    } else if (const auto* ohba = std::get_if<OhbaParams>(&p)) {
        params = {{"n", ohba->n}, {"phi", ohba->phi}};
    } else {
        const auto& mo = std::get<MusaOkumotoParams>(p);
        params = {{"lambda0", mo.lambda0}, {"theta", mo.theta}};
    }
    return {{"model", std::string(to_string(kind_of(p)))}, {"params", params}};
}

ModelParams model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("model") || !j.contains("params") ||
        !j.at("model").is_string() || !j.at("params").is_object()) {
        throw InputError("model JSON needs a 'model' name and a 'params' object");
    }
    const Json& p = j.at("params");
    auto get = [&p](const char* key) {
        if (!p.contains(key) || !p.at(key).is_number()) {
            throw InputError(std::string("model params missing numeric '") + key + "'");
        }
        return p.at(key).get<double>();
    };
    ModelParams out;
    switch (parse_model_kind(j.at("model").get<std::string>())) {
        case ModelKind::go:
            out = GoParams{get("a"), get("b")};
            break;
        case ModelKind::ohba:
            out = OhbaParams{get("n"), get("phi")};
            break;
        case ModelKind::mo:
            out = MusaOkumotoParams{get("lambda0"), get("theta")};
            break;
    }
    validate(out);
    return out;
}

void ProjectConfig::validate() const {
    srgm::validate(costs);
    if (!(stringency >= 0.0) || !std::isfinite(stringency)) {
        throw InputError("config: stringency must be nonnegative");
    }
    if (!(cost_odds >= 0.0 && cost_odds <= 1.0)) throw InputError("config: cost_odds must lie in [0, 1]");
    thresholds.validate();
    if (network.hidden == 0) throw InputError("config: network.hidden must be positive");
    if (!(network.theta > 0.0)) throw InputError("config: network.theta must be positive");
    if (!(network.learning_rate >= 0.0)) {
        throw InputError("config: network.learning_rate must be nonnegative");
    }
    if (network.epochs < 0) throw InputError("config: network.epochs must be nonnegative");
}

ProjectConfig parse_config(std::string_view text, std::string_view source) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string(source) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError(std::string(source) + ": config must be a JSON object");

    static const std::set<std::string> known{"costs",      "stringency",   "cost_odds",
                                             "stringency_mode", "delta_kind", "category_thresholds",
                                             "fault_tolerance", "network", "models"};
    for (const auto& [k, _] : j.items()) {
        if (!known.count(k)) throw InputError(std::string(source) + ": unknown key '" + k + "'");
    }

    ProjectConfig c;
    if (!j.contains("costs") || !j.at("costs").is_object()) {
        throw InputError(std::string(source) + ": missing 'costs' object");
    }
    const Json& k = j.at("costs");
    auto need = [&](const char* key) {
        if (!k.contains(key) || !k.at(key).is_number()) {
            throw InputError(std::string(source) + ": costs." + key + " is required");
        }
        return k.at(key).get<double>();
    };
    c.costs = {need("c1"), need("c2"), need("c3"), json_get(k, "c4", 0.0, source),
               need("lifecycle_t")};
    c.stringency = json_get(j, "stringency", c.stringency, source);
    c.cost_odds = json_get(j, "cost_odds", c.cost_odds, source);
    c.stringency_mode = parse_stringency_mode(
        json_get<std::string>(j, "stringency_mode", std::string(to_string(c.stringency_mode)), source));
    c.delta_kind = parse_delta_kind(
        json_get<std::string>(j, "delta_kind", std::string(to_string(c.delta_kind)), source));
    if (j.contains("category_thresholds")) {
        const auto cuts = json_get<std::vector<double>>(j, "category_thresholds", {}, source);
        if (cuts.size() != 4) throw InputError(std::string(source) + ": need 4 category thresholds");
        std::copy(cuts.begin(), cuts.end(), c.thresholds.cuts.begin());
    }
    for (Category cat : kCategoryOrder) c.fault_tolerance[cat] = 0;
    if (j.contains("fault_tolerance")) {
        const auto tol = json_get<std::map<std::string, std::uint64_t>>(j, "fault_tolerance", {}, source);
        for (const auto& [name, v] : tol) c.fault_tolerance[parse_category(name)] = v;
    }
    if (j.contains("network")) {
        const Json& n = j.at("network");
        c.network.hidden = json_get(n, "hidden", c.network.hidden, source);
        c.network.theta = json_get(n, "theta", c.network.theta, source);
        c.network.learning_rate = json_get(n, "learning_rate", c.network.learning_rate, source);
        c.network.epochs = json_get(n, "epochs", c.network.epochs, source);
        c.network.seed = json_get(n, "seed", c.network.seed, source);
    }
    if (j.contains("models")) {
        const Json& m = j.at("models");
        if (m.contains("current")) c.current_model = parse_model_kind(json_get<std::string>(m, "current", "", source));
        if (m.contains("previous")) c.previous_model = parse_model_kind(json_get<std::string>(m, "previous", "", source));
    }
    try {
        c.validate();
    } catch (const InputError& e) {
        throw InputError(std::string(source) + ": " + e.what());
    }
    return c;
}

Json config_to_json(const ProjectConfig& c) {
    Json tol = Json::object();
    for (const auto& [cat, v] : c.fault_tolerance) tol[std::string(to_string(cat))] = v;
    Json j{
        {"costs",
         {{"c1", c.costs.c1}, {"c2", c.costs.c2}, {"c3", c.costs.c3}, {"c4", c.costs.c4},
          {"lifecycle_t", c.costs.lifecycle_t}}},
        {"stringency", c.stringency},
        {"cost_odds", c.cost_odds},
        {"stringency_mode", std::string(to_string(c.stringency_mode))},
        {"delta_kind", std::string(to_string(c.delta_kind))},
        {"category_thresholds", c.thresholds.cuts},
        {"fault_tolerance", tol},
        {"network",
         {{"hidden", c.network.hidden}, {"theta", c.network.theta},
          {"learning_rate", c.network.learning_rate}, {"epochs", c.network.epochs},
          {"seed", c.network.seed}}},
    };
    Json models = Json::object();
    if (c.current_model) models["current"] = std::string(to_string(*c.current_model));
    if (c.previous_model) models["previous"] = std::string(to_string(*c.previous_model));
    j["models"] = models;
    return j;
}

}  // namespace srgm::io
