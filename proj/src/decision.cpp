#include "srgm/decision.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "srgm/error.hpp"

namespace srgm {
namespace {

int rank(Category c) { return static_cast<int>(c); }

Category promote(Category c) {
    return c == Category::very_high ? c : static_cast<Category>(rank(c) - 1);
}

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::very_high:
            return "VERY_HIGH";
        case Category::high:
            return "HIGH";
        case Category::medium:
            return "MEDIUM";
        case Category::low:
            return "LOW";
        case Category::very_low:
            return "VERY_LOW";
    }
    return "UNKNOWN";
}

Category parse_category(std::string_view name) {
    for (Category c : kCategoryOrder) {
        if (name == to_string(c)) return c;
    }
    throw InputError("unknown priority category '" + std::string(name) + "'");
}

void CategoryThresholds::validate() const {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!(cuts[i] > 0.0 && cuts[i] < 1.0)) {
            throw InputError("category thresholds must lie strictly inside (0, 1)");
        }
        if (i > 0 && !(cuts[i] < cuts[i - 1])) {
            throw InputError("category thresholds must be strictly decreasing");
        }
    }
}

Category CategoryThresholds::classify(double p) const {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (p >= cuts[i]) return kCategoryOrder[i];
    }
    return Category::very_low;
}

void check_dependency_graph(std::span<const ModuleNode> graph) {
    std::map<std::string, const ModuleNode*> by_id;
    for (const auto& n : graph) {
        if (!by_id.emplace(n.id, &n).second) throw InputError("duplicate module id '" + n.id + "'");
    }
    for (const auto& n : graph) {
        for (const auto& p : n.parents) {
            if (p == n.id) throw InputError("module '" + n.id + "' depends on itself");
            if (!by_id.count(p)) {
                throw InputError("module '" + n.id + "' depends on unknown module '" + p + "'");
            }
        }
    }

    // Iterative DFS; nodes are visited in id order so the reported cycle is
    // deterministic.
    enum class Mark { unvisited, active, done };
    std::map<std::string, Mark> mark;
    for (const auto& [id, _] : by_id) mark[id] = Mark::unvisited;
    for (const auto& [root, _] : by_id) {
        if (mark[root] != Mark::unvisited) continue;
        std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::active;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            const auto& parents = by_id.at(id)->parents;
            if (next == parents.size()) {
                mark[id] = Mark::done;
                stack.pop_back();
                continue;
            }
            const std::string child = parents[next++];
            if (mark[child] == Mark::active) {
                std::string cycle;
                auto it = std::find_if(stack.begin(), stack.end(),
                                       [&](const auto& e) { return e.first == child; });
                for (; it != stack.end(); ++it) cycle += it->first + " -> ";
                throw InputError("dependency cycle: " + cycle + child);
            }
            if (mark[child] == Mark::unvisited) {
                mark[child] = Mark::active;
                stack.emplace_back(child, 0);
            }
        }
    }
}

std::vector<PriorityAssignment> categorize(std::span<const ModuleWeight> weights,
                                           std::span<const ModuleNode> graph,
                                           const CategoryThresholds& thresholds) {
    thresholds.validate();
    check_dependency_graph(graph);

    std::map<std::string, const ModuleNode*> nodes;
    for (const auto& n : graph) nodes.emplace(n.id, &n);

    std::map<std::string, Category> base;
    std::map<double, int> p_counts;
    for (const auto& w : weights) {
        if (!(w.p_k >= 0.0 && w.p_k <= 1.0)) {
            throw InputError("module '" + w.id + "': p_k must lie in [0, 1]");
        }
        if (!base.emplace(w.id, thresholds.classify(w.p_k)).second) {
            throw InputError("duplicate module id '" + w.id + "'");
        }
        ++p_counts[w.p_k];
    }

    std::vector<PriorityAssignment> out;
    out.reserve(weights.size());
    for (const auto& w : weights) {
        PriorityAssignment a;
        a.module_id = w.id;
        a.p_k = w.p_k;
        a.base_category = base.at(w.id);
        a.category = a.base_category;
        a.tie = p_counts.at(w.p_k) > 1;
        if (auto it = nodes.find(w.id); it != nodes.end()) {
            for (const auto& parent : it->second->parents) {
                const auto pb = base.find(parent);
                if (pb == base.end()) {
                    throw InputError("module '" + w.id + "' depends on '" + parent +
                                     "', which has no priority weight");
                }
                if (!nodes.at(parent)->tested && rank(pb->second) < rank(a.base_category)) {
                    a.boosted = true;
                }
            }
        }
        if (a.boosted) a.category = promote(a.base_category);
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.p_k != y.p_k) return x.p_k > y.p_k;
        return x.module_id < y.module_id;
    });
    return out;
}

double deviation_time(double actual_time, double optimal_time) {
    if (!(optimal_time > 0.0)) {
        throw DomainError("time deviation undefined: optimal release time is zero (NO_TESTING policy)");
    }
    return (actual_time - optimal_time) / optimal_time;
}

double deviation_cost(double actual_cost, double optimal_cost) {
    if (!(optimal_cost > 0.0)) throw InputError("cost deviation requires a positive optimal cost");
    return (actual_cost - optimal_cost) / optimal_cost;
}

double weighted_limiting_factor(double cost, double optimal_cost, double time,
                                double optimal_time, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("cost odds p must lie in [0, 1]");
    if (!(optimal_cost > 0.0) || !(optimal_time > 0.0)) {
        throw DomainError("weighted limiting factor undefined for a zero optimum");
    }
    return p * (cost - optimal_cost) / optimal_cost +
           (1.0 - p) * (time - optimal_time) / optimal_time;
}

std::string_view to_string(Recommendation r) {
    switch (r) {
        case Recommendation::release:
            return "RELEASE";
        case Recommendation::continue_testing:
            return "CONTINUE_TESTING";
        case Recommendation::reject:
            return "REJECT";
    }
    return "UNKNOWN";
}

Decision recommend(double delta, double stringency, const TestOutcome& outcome, Category category) {
    if (!(stringency >= 0.0)) throw InputError("stringency must be nonnegative");
    if (std::isnan(delta)) throw NumericError("limiting factor is NaN");
    Decision d;
    d.category = category;
    d.delta = delta;
    d.checked_delta = delta;
    d.stringency = stringency;
    if (delta > stringency) {
        d.recommendation = Recommendation::reject;
    } else if (outcome.faults_found <= outcome.faults_tolerated) {
        d.recommendation = Recommendation::release;
    } else {
        d.recommendation = Recommendation::continue_testing;
    }
    return d;
}

std::string_view to_string(StringencyMode m) {
    return m == StringencyMode::cumulative ? "cumulative" : "per_category";
}

std::string_view to_string(DeltaKind k) { return k == DeltaKind::plain ? "plain" : "weighted"; }

StringencyMode parse_stringency_mode(std::string_view s) {
    if (s == "cumulative") return StringencyMode::cumulative;
    if (s == "per_category") return StringencyMode::per_category;
    throw InputError("unknown stringency mode '" + std::string(s) + "'");
}

DeltaKind parse_delta_kind(std::string_view s) {
    if (s == "plain") return DeltaKind::plain;
    if (s == "weighted") return DeltaKind::weighted;
    throw InputError("unknown delta kind '" + std::string(s) + "'");
}

DecisionReport decide(const ReleasePolicy& policy, std::span<const CategoryActuals> actuals,
                      const DecisionSettings& settings) {
    if (policy.policy_case == PolicyCase::no_testing || !(policy.t_star > 0.0)) {
        throw DomainError("deviations undefined: the release policy is NO_TESTING");
    }
    if (!(settings.stringency >= 0.0)) throw InputError("stringency must be nonnegative");
    if (!(settings.cost_odds >= 0.0 && settings.cost_odds <= 1.0)) {
        throw InputError("cost odds p must lie in [0, 1]");
    }
    std::set<Category> seen;
    for (const auto& a : actuals) {
        if (!seen.insert(a.category).second) {
            throw InputError("duplicate actuals for category " + std::string(to_string(a.category)));
        }
        if (!(a.outcome.actual_time >= 0.0) || !(a.outcome.actual_cost >= 0.0)) {
            throw InputError("actual time and cost must be nonnegative");
        }
    }

    std::vector<CategoryActuals> ordered(actuals.begin(), actuals.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& x, const auto& y) { return rank(x.category) < rank(y.category); });

    DecisionReport report;
    double running = 0.0;
    for (const auto& a : ordered) {
        const double alpha = deviation_time(a.outcome.actual_time, policy.t_star);
        const double beta = deviation_cost(a.outcome.actual_cost, policy.expected_cost_at_t_star);
        const double plain = limiting_factor(alpha, beta);
        const double weighted =
            weighted_limiting_factor(a.outcome.actual_cost, policy.expected_cost_at_t_star,
                                     a.outcome.actual_time, policy.t_star, settings.cost_odds);
        const double own = settings.kind == DeltaKind::plain ? plain : weighted;
        running += own;
        const double checked = settings.mode == StringencyMode::cumulative ? running : own;

        Decision d = recommend(checked, settings.stringency, a.outcome, a.category);
        d.alpha = alpha;
        d.beta = beta;
        d.delta = plain;
        d.weighted_delta = weighted;
        d.cumulative_delta = running;
        report.decisions.push_back(d);
    }

    for (const auto& d : report.decisions) {
        if (d.recommendation == Recommendation::reject) {
            report.overall = Recommendation::reject;
            report.triggering_category = d.category;
            return report;
        }
    }
    for (const auto& d : report.decisions) {
        if (d.recommendation == Recommendation::continue_testing) {
            report.overall = Recommendation::continue_testing;
            report.triggering_category = d.category;
            return report;
        }
    }
    return report;
}

}  // namespace srgm
