#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "womgraph/ingest.hpp"
#include "womgraph/relevance.hpp"
#include "womgraph/text.hpp"

namespace womgraph {

using NodeIndex = std::uint32_t;

// Base interaction weights per reaction type.
struct ReactionWeights {
    double like_on_comment = 1.0;
    double like = 2.0;
    double comment = 4.0;
    double share = 8.0;

    double of(ReactionKind kind) const;
    void validate() const;
};

struct Edge {
    UserId src;
    UserId dst;
    double weight = 0.0;

    bool operator==(const Edge &) const = default;
};

struct IndexedEdge {
    NodeIndex src;
    NodeIndex dst;
    double weight;
};

struct Arc {
    NodeIndex node;
    double weight;
};

/// Weighted directed simple graph over users. Nodes are indexed in ascending id
/// order, so index order doubles as the tie-break order. Immutable once built.
class InteractionGraph {
public:
    InteractionGraph() = default;

    // Parallel edges are summed; self loops and non-positive weights are rejected.
    // Endpoints missing from `nodes` are added.
    InteractionGraph(std::vector<UserId> nodes, const std::vector<Edge> &edges);

    // `nodes` must be sorted and unique. Contributions to the same (src, dst) pair
    // are summed in ascending weight order, which makes the result independent of
    // the order of `contributions`.
    static InteractionGraph from_contributions(std::vector<UserId> nodes,
                                               std::vector<IndexedEdge> contributions);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return out_arcs_.size(); }
    bool empty() const { return nodes_.empty(); }

    const std::vector<UserId> &nodes() const { return nodes_; }
    const UserId &id(NodeIndex v) const { return nodes_[v]; }
    std::optional<NodeIndex> index_of(std::string_view id) const;

    std::span<const Arc> out_arcs(NodeIndex v) const {
        return {out_arcs_.data() + out_offsets_[v], out_arcs_.data() + out_offsets_[v + 1]};
    }
    std::span<const Arc> in_arcs(NodeIndex v) const {
        return {in_arcs_.data() + in_offsets_[v], in_arcs_.data() + in_offsets_[v + 1]};
    }
    double out_weight(NodeIndex v) const { return out_weight_[v]; }
    double in_weight(NodeIndex v) const { return in_weight_[v]; }

    std::optional<double> weight(std::string_view src, std::string_view dst) const;
    double total_weight() const;

    // Edges sorted by (src, dst).
    std::vector<Edge> edges() const;
    std::vector<IndexedEdge> indexed_edges() const;

    InteractionGraph scaled(double factor) const;
    InteractionGraph reversed() const;

    bool operator==(const InteractionGraph &other) const;

private:
    std::vector<UserId> nodes_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<Arc> in_arcs_;
    std::vector<double> out_weight_;
    std::vector<double> in_weight_;
};

// bRelevance of every content item of the log, indexed like log.contents().
std::vector<double> content_boosts(const GroupActivityLog &log, const TopicQuery &topic,
                                   const RelatednessTable &table, double alpha,
                                   const Preprocessor &preprocessor);

struct GraphBuildOptions {
    ReactionWeights weights;
    double alpha = kDefaultAlpha;
    unsigned workers = 1;
};

/// Edge u->v accumulates weight(kind) * bRelevance(target) for every reaction by u on
/// content authored by v. Self reactions are dropped; every log user becomes a node.
InteractionGraph build_interaction_graph(const GroupActivityLog &log, const TopicQuery &topic,
                                         const RelatednessTable &table,
                                         const Preprocessor &preprocessor,
                                         const GraphBuildOptions &options = {});

// Same as above with every bRelevance fixed to 1.
InteractionGraph build_unboosted_graph(const GroupActivityLog &log,
                                       const ReactionWeights &weights = {});

enum class DegreeMode { in, out, total };

DegreeMode parse_degree_mode(std::string_view name);
std::string_view degree_mode_name(DegreeMode mode);

struct DegreeHistogram {
    DegreeMode mode = DegreeMode::total;
    std::map<std::size_t, std::size_t> buckets; // degree -> users
    std::map<std::size_t, double> ccdf;         // degree -> fraction with degree >= d
};

std::size_t degree(const InteractionGraph &graph, NodeIndex v, DegreeMode mode);

DegreeHistogram degree_distribution(const InteractionGraph &graph, DegreeMode mode);

// Least-squares slope of log(ccdf) against log(degree) over degrees >= min_degree.
// Returns nullopt with fewer than two usable points.
std::optional<double> ccdf_tail_slope(const DegreeHistogram &hist, std::size_t min_degree);

// "degree\tcount\tccdf" lines in ascending degree order.
void write_degree_histogram(std::ostream &out, const DegreeHistogram &hist);

enum class GraphFormat { edge_list, dot };

GraphFormat parse_graph_format(std::string_view name);

void export_graph(std::ostream &out, const InteractionGraph &graph, GraphFormat format);

// Reads the edge-list format written by export_graph.
InteractionGraph read_edge_list(std::istream &in);

} // namespace womgraph
