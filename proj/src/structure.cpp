#include "womgraph/structure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

std::string_view bowtie_class_name(BowTieClass c) {
    switch (c) {
    case BowTieClass::core:
        return "core";
    case BowTieClass::in:
        return "in";
    case BowTieClass::out:
        return "out";
    case BowTieClass::tendrils:
        return "tendrils";
    case BowTieClass::tubes:
        return "tubes";
    case BowTieClass::disconnected:
        return "disconnected";
    }
    return "unknown";
}

double BowTieDecomposition::fraction(BowTieClass c) const {
    if (node_class.empty())
        return 0.0;
    return static_cast<double>(of(c).size()) / static_cast<double>(node_class.size());
}

std::vector<std::vector<NodeIndex>> strongly_connected_components(const InteractionGraph &graph) {
    const std::size_t n = graph.node_count();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> number(n, kUnvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeIndex> stack;
    std::vector<std::vector<NodeIndex>> components;

    struct Frame {
        NodeIndex node;
        std::size_t next_arc;
    };
    std::vector<Frame> call;
    std::size_t counter = 0;

    for (NodeIndex root = 0; root < n; ++root) {
        if (number[root] != kUnvisited)
            continue;
        call.push_back({root, 0});
        number[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto &frame = call.back();
            const NodeIndex v = frame.node;
            auto arcs = graph.out_arcs(v);
            if (frame.next_arc < arcs.size()) {
                const NodeIndex w = arcs[frame.next_arc++].node;
                if (number[w] == kUnvisited) {
                    number[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], number[w]);
                }
                continue;
            }
            if (low[v] == number[v]) {
                std::vector<NodeIndex> component;
                NodeIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call.pop_back();
            if (!call.empty())
                low[call.back().node] = std::min(low[call.back().node], low[v]);
        }
    }
    return components;
}

namespace {

template <typename Neighbors>
std::vector<char> reach(std::size_t n, const std::vector<NodeIndex> &sources, Neighbors next) {
    std::vector<char> seen(n, 0);
    std::vector<NodeIndex> frontier;
    for (NodeIndex s : sources) {
        if (!seen[s]) {
            seen[s] = 1;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        const NodeIndex v = frontier.back();
        frontier.pop_back();
        for (const auto &a : next(v)) {
            if (!seen[a.node]) {
                seen[a.node] = 1;
                frontier.push_back(a.node);
            }
        }
    }
    return seen;
}

// Component label per node, ignoring edge direction.
std::vector<std::size_t> weak_labels(const InteractionGraph &graph, std::size_t &count) {
    const std::size_t n = graph.node_count();
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, kNone);
    std::vector<NodeIndex> frontier;
    count = 0;
    for (NodeIndex root = 0; root < n; ++root) {
        if (label[root] != kNone)
            continue;
        label[root] = count;
        frontier.push_back(root);
        while (!frontier.empty()) {
            const NodeIndex v = frontier.back();
            frontier.pop_back();
            for (auto arcs : {graph.out_arcs(v), graph.in_arcs(v)}) {
                for (const auto &a : arcs) {
                    if (label[a.node] == kNone) {
                        label[a.node] = count;
                        frontier.push_back(a.node);
                    }
                }
            }
        }
        ++count;
    }
    return label;
}

} // namespace

BowTieDecomposition bowtie_decompose(const InteractionGraph &graph) {
    if (graph.empty())
        throw InvalidArgument("bow-tie decomposition needs a nonempty graph");
    const std::size_t n = graph.node_count();
    auto components = strongly_connected_components(graph);
    const auto &core = *std::min_element(
        components.begin(), components.end(), [](const auto &a, const auto &b) {
            if (a.size() != b.size())
                return a.size() > b.size();
            return a.front() < b.front();
        });

    auto forward = [&](NodeIndex v) { return graph.out_arcs(v); };
    auto backward = [&](NodeIndex v) { return graph.in_arcs(v); };
    const auto from_core = reach(n, core, forward);
    const auto to_core = reach(n, core, backward);

    BowTieDecomposition result;
    result.node_class.assign(n, BowTieClass::disconnected);
    std::vector<NodeIndex> in_nodes, out_nodes;
    for (NodeIndex v = 0; v < n; ++v) {
        if (from_core[v] && to_core[v]) {
            result.node_class[v] = BowTieClass::core;
        } else if (to_core[v]) {
            result.node_class[v] = BowTieClass::in;
            in_nodes.push_back(v);
        } else if (from_core[v]) {
            result.node_class[v] = BowTieClass::out;
            out_nodes.push_back(v);
        }
    }

    const auto from_in = reach(n, in_nodes, forward);
    const auto to_out = reach(n, out_nodes, backward);
    std::size_t weak_count = 0;
    const auto weak = weak_labels(graph, weak_count);
    const std::size_t core_label = weak[core.front()];
    for (NodeIndex v = 0; v < n; ++v) {
        if (from_core[v] || to_core[v])
            continue;
        if (from_in[v] && to_out[v])
            result.node_class[v] = BowTieClass::tubes;
        else if (weak[v] == core_label)
            result.node_class[v] = BowTieClass::tendrils;
    }
    for (NodeIndex v = 0; v < n; ++v)
        result.members[static_cast<std::size_t>(result.node_class[v])].push_back(graph.id(v));
    return result;
}

std::vector<SubGroup> weakly_connected_components(const InteractionGraph &graph) {
    std::size_t count = 0;
    const auto label = weak_labels(graph, count);
    std::vector<SubGroup> groups(count);
    for (NodeIndex v = 0; v < graph.node_count(); ++v)
        groups[label[v]].members.push_back(graph.id(v));
    std::sort(groups.begin(), groups.end(), [](const SubGroup &a, const SubGroup &b) {
        if (a.size() != b.size())
            return a.size() > b.size();
        return a.members.front() < b.members.front();
    });
    return groups;
}

void write_bowtie_report(std::ostream &out, const BowTieDecomposition &decomposition,
                         bool per_user) {
    std::ostringstream buf;
    buf << "class\tcount\tfraction\n";
    for (auto c : kBowTieClasses)
        buf << bowtie_class_name(c) << '\t' << decomposition.of(c).size() << '\t'
            << format_double(decomposition.fraction(c)) << '\n';
    if (per_user) {
        std::vector<std::pair<std::string_view, BowTieClass>> rows;
        for (auto c : kBowTieClasses)
            for (const auto &user : decomposition.of(c))
                rows.emplace_back(user, c);
        std::sort(rows.begin(), rows.end());
        buf << "\nuser\tclass\n";
        for (const auto &[user, c] : rows)
            buf << user << '\t' << bowtie_class_name(c) << '\n';
    }
    out << buf.str();
}

void write_components(std::ostream &out, const std::vector<SubGroup> &components) {
    std::ostringstream buf;
    buf << "component\tsize\tmembers\n";
    for (std::size_t i = 0; i < components.size(); ++i) {
        buf << i + 1 << '\t' << components[i].size() << '\t';
        for (std::size_t j = 0; j < components[i].members.size(); ++j)
            buf << (j ? "," : "") << components[i].members[j];
        buf << '\n';
    }
    out << buf.str();
}

} // namespace womgraph
