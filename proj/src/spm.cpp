#include "mechkit/spm.hpp"

#include "mechkit/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace mechkit {

namespace {

// Selected options and the distinct-option index for one agent's deviations.
struct DeviationScan {
    std::vector<OptionId> selected;           // o(k) per type index
    std::vector<OptionId> distinct;           // in order of first appearance
    std::vector<std::size_t> vertex_of_type;  // type index -> index into distinct
    std::vector<std::vector<Value>> value_at_distinct;  // [type][distinct option]
};

DeviationScan scan_deviations(const Environment& env, const OptionRule& rule, std::size_t agent,
                              const TypeProfile& profile) {
    require_valid_profile(env, profile);
    if (agent >= env.agent_count())
        throw InputError("agent index " + std::to_string(agent) + " out of range");

    const std::size_t d = env.domain_size(agent);
    DeviationScan scan;
    scan.selected.reserve(d);
    scan.vertex_of_type.reserve(d);

    TypeProfile deviated = profile;
    std::map<OptionId, std::size_t> seen;
    for (std::size_t k = 0; k < d; ++k) {
        deviated.types[agent] = k;
        OptionId option = rule.select(env, deviated);
        auto [it, inserted] = seen.emplace(option, scan.distinct.size());
        if (inserted) scan.distinct.push_back(option);
        scan.vertex_of_type.push_back(it->second);
        scan.selected.push_back(std::move(option));
    }

    scan.value_at_distinct.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        scan.value_at_distinct[k].reserve(scan.distinct.size());
        for (const auto& option : scan.distinct)
            scan.value_at_distinct[k].push_back(valuation_at(env, agent, k, option));
    }
    return scan;
}

TypeGraph full_graph(std::size_t agent, const DeviationScan& scan) {
    const std::size_t d = scan.selected.size();
    TypeGraph tg;
    tg.agent = agent;
    tg.selected = scan.selected;
    tg.graph.vertex_count = d + 1;
    tg.graph.edges.reserve(d * d + d);

    const std::size_t star = d;
    for (std::size_t k = 0; k < d; ++k)
        tg.graph.edges.push_back({star, k, scan.value_at_distinct[k][scan.vertex_of_type[k]]});
    for (std::size_t k1 = 0; k1 < d; ++k1) {
        for (std::size_t k2 = 0; k2 < d; ++k2) {
            const Value& at_own = scan.value_at_distinct[k2][scan.vertex_of_type[k2]];
            const Value& at_other = scan.value_at_distinct[k2][scan.vertex_of_type[k1]];
            tg.graph.edges.push_back({k1, k2, at_own - at_other});
        }
    }
    return tg;
}

ContractedGraph contracted_graph(std::size_t agent, const DeviationScan& scan) {
    const std::size_t d = scan.selected.size();
    const std::size_t n_options = scan.distinct.size();

    ContractedGraph cg;
    cg.agent = agent;
    cg.option_of_vertex = scan.distinct;
    cg.vertex_of_type = scan.vertex_of_type;
    cg.graph.vertex_count = n_options + 1;
    cg.graph.edges.reserve(n_options * n_options + n_options);

    const std::size_t star = n_options;
    std::vector<std::optional<Value>> weight(n_options);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t j = scan.vertex_of_type[k];
        const Value& w = scan.value_at_distinct[k][j];
        if (!weight[j] || w < *weight[j]) weight[j] = w;
    }
    for (std::size_t j = 0; j < n_options; ++j) cg.graph.edges.push_back({star, j, *weight[j]});

    for (std::size_t j1 = 0; j1 < n_options; ++j1) {
        std::fill(weight.begin(), weight.end(), std::nullopt);
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j2 = scan.vertex_of_type[k];
            const Value w = scan.value_at_distinct[k][j2] - scan.value_at_distinct[k][j1];
            if (!weight[j2] || w < *weight[j2]) weight[j2] = w;
        }
        for (std::size_t j2 = 0; j2 < n_options; ++j2)
            cg.graph.edges.push_back({j1, j2, *weight[j2]});
    }
    return cg;
}

}  // namespace

TypeGraph build_type_graph(const Environment& env, const OptionRule& rule, std::size_t agent,
                           const TypeProfile& profile) {
    return full_graph(agent, scan_deviations(env, rule, agent, profile));
}

ContractedGraph contract_graph(const TypeGraph& graph, const OptionRule& rule,
                               const Environment& env, std::size_t agent,
                               const TypeProfile& profile) {
    if (graph.agent != agent || graph.graph.vertex_count != env.domain_size(agent) + 1)
        throw InputError("type graph does not match the agent's domain");
    return contracted_graph(agent, scan_deviations(env, rule, agent, profile));
}

Value shortest_distance(const Digraph& graph, std::size_t source, std::size_t target) {
    const std::size_t n = graph.vertex_count;
    if (source >= n || target >= n) throw InputError("graph vertex out of range");
    for (const auto& e : graph.edges)
        if (e.from >= n || e.to >= n) throw InputError("graph edge endpoint out of range");

    std::vector<std::optional<Value>> dist(n);
    dist[source] = Value(0);

    bool changed = true;
    for (std::size_t round = 1; round < n && changed; ++round) {
        changed = false;
        for (const auto& e : graph.edges) {
            if (!dist[e.from]) continue;
            Value candidate = *dist[e.from] + e.weight;
            if (!dist[e.to] || candidate < *dist[e.to]) {
                dist[e.to] = std::move(candidate);
                changed = true;
            }
        }
    }

    if (changed) {
        // Still-relaxable edges sit on or downstream of a negative cycle. The
        // target distance is corrupted only if such a vertex reaches the target.
        std::vector<bool> reaches_target(n, false);
        reaches_target[target] = true;
        std::vector<std::size_t> queue{target};
        while (!queue.empty()) {
            const std::size_t v = queue.back();
            queue.pop_back();
            for (const auto& e : graph.edges) {
                if (e.to == v && !reaches_target[e.from]) {
                    reaches_target[e.from] = true;
                    queue.push_back(e.from);
                }
            }
        }
        for (const auto& e : graph.edges) {
            if (!dist[e.from]) continue;
            if ((!dist[e.to] || *dist[e.from] + e.weight < *dist[e.to]) && reaches_target[e.to])
                throw NegativeCycleError("negative directed cycle on a source-to-target walk");
        }
    }

    if (!dist[target]) throw InputError("target vertex unreachable from source");
    return *dist[target];
}

std::string to_dot(const TypeGraph& graph, const Environment& env) {
    std::ostringstream os;
    os << "digraph agent_" << graph.agent << " {\n";
    os << "  v" << graph.star() << " [label=\"*\"];\n";
    for (std::size_t k = 0; k + 1 < graph.graph.vertex_count; ++k)
        os << "  v" << k << " [label=\"type " << k << " -> " << option_label(graph.selected[k])
           << "\"];\n";
    for (const auto& e : graph.graph.edges)
        os << "  v" << e.from << " -> v" << e.to << " [label=\"" << e.weight.str() << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const ContractedGraph& graph) {
    std::ostringstream os;
    os << "digraph agent_" << graph.agent << "_contracted {\n";
    os << "  v" << graph.star() << " [label=\"*\"];\n";
    for (std::size_t j = 0; j < graph.option_of_vertex.size(); ++j)
        os << "  v" << j << " [label=\"" << option_label(graph.option_of_vertex[j]) << "\"];\n";
    for (const auto& e : graph.graph.edges)
        os << "  v" << e.from << " -> v" << e.to << " [label=\"" << e.weight.str() << "\"];\n";
    os << "}\n";
    return os.str();
}

std::vector<Value> compute_payments(const Environment& env, const OptionRule& rule,
                                    const TypeProfile& profile, PaymentMode mode) {
    require_valid_profile(env, profile);

    std::vector<Value> payments;
    payments.reserve(env.agent_count());
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
        // Graphs live per (agent, profile) and are discarded right after the solve.
        const DeviationScan scan = scan_deviations(env, rule, i, profile);
        const bool contract =
            mode == PaymentMode::Contracted ||
            (mode == PaymentMode::Auto && scan.distinct.size() < scan.selected.size());
        try {
            Value distance;
            if (contract) {
                const ContractedGraph cg = contracted_graph(i, scan);
                distance =
                    shortest_distance(cg.graph, cg.star(), scan.vertex_of_type[profile.types[i]]);
            } else {
                const TypeGraph tg = full_graph(i, scan);
                distance = shortest_distance(tg.graph, tg.star(), profile.types[i]);
            }
            payments.push_back(-distance);
        } catch (const NegativeCycleError& e) {
            throw NegativeCycleError("agent " + std::to_string(i) + ": " + e.what(), i);
        }
    }
    return payments;
}

std::vector<Value> payments_for(const Environment& env, const OptionRule& rule,
                                const TypeProfile& profile, const PaymentSpec& spec) {
    switch (spec.kind) {
        case PaymentSpec::Kind::Proposed:
            return compute_payments(env, rule, profile, spec.mode);
        case PaymentSpec::Kind::Clarke:
            return clarke_payments(env, rule, profile);
        case PaymentSpec::Kind::VcgBudget:
            return vcg_budget_payments(env, rule, profile);
        case PaymentSpec::Kind::WeightedVcg:
            return weighted_vcg_payments(env, rule, profile, spec.pivot);
    }
    throw InputError("unknown payment engine");
}

MechanismOutcome run_mechanism(const Environment& env, const OptionRule& rule,
                               const TypeProfile& profile, const PaymentSpec& spec) {
    return assemble_outcome(env, profile, rule.select(env, profile),
                            payments_for(env, rule, profile, spec));
}

}  // namespace mechkit
