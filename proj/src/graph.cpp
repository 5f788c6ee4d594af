#include "womgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

double ReactionWeights::of(ReactionKind kind) const {
    switch (kind) {
    case ReactionKind::like_on_comment:
        return like_on_comment;
    case ReactionKind::like:
        return like;
    case ReactionKind::comment_reaction:
        return comment;
    case ReactionKind::share:
        return share;
    }
    return 0.0;
}

void ReactionWeights::validate() const {
    for (double w : {like_on_comment, like, comment, share}) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw InvalidArgument("reaction weights must be finite and strictly positive");
    }
}

InteractionGraph::InteractionGraph(std::vector<UserId> nodes, const std::vector<Edge> &edges) {
    for (const auto &e : edges) {
        nodes.push_back(e.src);
        nodes.push_back(e.dst);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto index = [&](const UserId &id) {
        return static_cast<NodeIndex>(std::lower_bound(nodes.begin(), nodes.end(), id) -
                                      nodes.begin());
    };
    std::vector<IndexedEdge> indexed;
    indexed.reserve(edges.size());
    for (const auto &e : edges)
        indexed.push_back({index(e.src), index(e.dst), e.weight});
    *this = from_contributions(std::move(nodes), std::move(indexed));
}

InteractionGraph InteractionGraph::from_contributions(std::vector<UserId> nodes,
                                                      std::vector<IndexedEdge> contributions) {
    if (!std::is_sorted(nodes.begin(), nodes.end()) ||
        std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
        throw InvalidArgument("graph nodes must be sorted and unique");
    for (const auto &id : nodes) {
        if (!is_valid_id(id))
            throw InvalidArgument("invalid node id '" + id + "'");
    }
    const std::size_t n = nodes.size();
    for (const auto &c : contributions) {
        if (c.src >= n || c.dst >= n)
            throw InvalidArgument("edge endpoint out of range");
        if (c.src == c.dst)
            throw InvalidArgument("self loop on '" + nodes[c.src] + "'");
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw InvalidArgument("edge weights must be finite and strictly positive");
    }
    std::sort(contributions.begin(), contributions.end(), [](const auto &a, const auto &b) {
        if (a.src != b.src)
            return a.src < b.src;
        if (a.dst != b.dst)
            return a.dst < b.dst;
        return a.weight < b.weight;
    });

    std::vector<IndexedEdge> merged;
    for (const auto &c : contributions) {
        if (!merged.empty() && merged.back().src == c.src && merged.back().dst == c.dst)
            merged.back().weight += c.weight;
        else
            merged.push_back(c);
    }

    InteractionGraph g;
    g.nodes_ = std::move(nodes);
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    g.out_weight_.assign(n, 0.0);
    g.in_weight_.assign(n, 0.0);
    for (const auto &e : merged) {
        ++g.out_offsets_[e.src + 1];
        ++g.in_offsets_[e.dst + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.out_offsets_[v + 1] += g.out_offsets_[v];
        g.in_offsets_[v + 1] += g.in_offsets_[v];
    }
    g.out_arcs_.resize(merged.size());
    g.in_arcs_.resize(merged.size());
    std::vector<std::size_t> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::size_t> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    // merged is sorted by (src, dst), so both arc lists come out sorted by neighbor.
    for (const auto &e : merged) {
        g.out_arcs_[out_pos[e.src]++] = {e.dst, e.weight};
        g.in_arcs_[in_pos[e.dst]++] = {e.src, e.weight};
    }
    for (NodeIndex v = 0; v < n; ++v) {
        for (const auto &a : g.out_arcs(v))
            g.out_weight_[v] += a.weight;
        for (const auto &a : g.in_arcs(v))
            g.in_weight_[v] += a.weight;
    }
    return g;
}

std::optional<NodeIndex> InteractionGraph::index_of(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id)
        return std::nullopt;
    return static_cast<NodeIndex>(it - nodes_.begin());
}

std::optional<double> InteractionGraph::weight(std::string_view src, std::string_view dst) const {
    auto s = index_of(src);
    auto d = index_of(dst);
    if (!s || !d)
        return std::nullopt;
    auto arcs = out_arcs(*s);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), *d,
                               [](const Arc &a, NodeIndex v) { return a.node < v; });
    if (it == arcs.end() || it->node != *d)
        return std::nullopt;
    return it->weight;
}

double InteractionGraph::total_weight() const {
    double sum = 0.0;
    for (const auto &a : out_arcs_)
        sum += a.weight;
    return sum;
}

std::vector<IndexedEdge> InteractionGraph::indexed_edges() const {
    std::vector<IndexedEdge> out;
    out.reserve(out_arcs_.size());
    for (NodeIndex v = 0; v < nodes_.size(); ++v)
        for (const auto &a : out_arcs(v))
            out.push_back({v, a.node, a.weight});
    return out;
}

std::vector<Edge> InteractionGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(out_arcs_.size());
    for (const auto &e : indexed_edges())
        out.push_back({nodes_[e.src], nodes_[e.dst], e.weight});
    return out;
}

InteractionGraph InteractionGraph::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidArgument("scale factor must be finite and positive");
    auto edges = indexed_edges();
    for (auto &e : edges)
        e.weight *= factor;
    return from_contributions(nodes_, std::move(edges));
}

InteractionGraph InteractionGraph::reversed() const {
    auto edges = indexed_edges();
    for (auto &e : edges)
        std::swap(e.src, e.dst);
    return from_contributions(nodes_, std::move(edges));
}

bool InteractionGraph::operator==(const InteractionGraph &other) const {
    if (nodes_ != other.nodes_ || out_arcs_.size() != other.out_arcs_.size())
        return false;
    if (out_offsets_ != other.out_offsets_)
        return false;
    for (std::size_t i = 0; i < out_arcs_.size(); ++i) {
        if (out_arcs_[i].node != other.out_arcs_[i].node ||
            out_arcs_[i].weight != other.out_arcs_[i].weight)
            return false;
    }
    return true;
}

std::vector<double> content_boosts(const GroupActivityLog &log, const TopicQuery &topic,
                                   const RelatednessTable &table, double alpha,
                                   const Preprocessor &preprocessor) {
    std::vector<double> boosts;
    boosts.reserve(log.contents().size());
    for (const auto &item : log.contents())
        boosts.push_back(
            boosted_relevance(content_relevance(preprocessor(item.text), topic, table), alpha));
    return boosts;
}

namespace {

// Reactions [begin, end) as edge contributions; self reactions are skipped.
void collect_contributions(const GroupActivityLog &log, const std::vector<UserId> &nodes,
                           const std::vector<double> &boosts, const ReactionWeights &weights,
                           std::size_t begin, std::size_t end, std::vector<IndexedEdge> &out) {
    auto index = [&](const UserId &id) {
        return static_cast<NodeIndex>(std::lower_bound(nodes.begin(), nodes.end(), id) -
                                      nodes.begin());
    };
    const auto &reactions = log.reactions();
    for (std::size_t i = begin; i < end; ++i) {
        const auto &r = reactions[i];
        const std::size_t target = *log.content_index(r.target);
        const auto &author = log.contents()[target].author;
        if (author == r.reactor)
            continue;
        out.push_back({index(r.reactor), index(author), weights.of(r.kind) * boosts[target]});
    }
}

InteractionGraph assemble(const GroupActivityLog &log, const std::vector<double> &boosts,
                          const ReactionWeights &weights, unsigned workers) {
    weights.validate();
    const auto &nodes = log.users();
    const std::size_t count = log.reactions().size();
    workers = std::max(1u, workers);
    std::vector<std::vector<IndexedEdge>> shards(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        if (workers == 1)
            collect_contributions(log, nodes, boosts, weights, begin, end, shards[w]);
        else
            threads.emplace_back(collect_contributions, std::cref(log), std::cref(nodes),
                                 std::cref(boosts), std::cref(weights), begin, end,
                                 std::ref(shards[w]));
    }
    for (auto &t : threads)
        t.join();
    std::vector<IndexedEdge> all;
    all.reserve(count);
    for (auto &s : shards)
        all.insert(all.end(), s.begin(), s.end());
    return InteractionGraph::from_contributions(nodes, std::move(all));
}

} // namespace

InteractionGraph build_interaction_graph(const GroupActivityLog &log, const TopicQuery &topic,
                                         const RelatednessTable &table,
                                         const Preprocessor &preprocessor,
                                         const GraphBuildOptions &options) {
    auto boosts = content_boosts(log, topic, table, options.alpha, preprocessor);
    return assemble(log, boosts, options.weights, options.workers);
}

InteractionGraph build_unboosted_graph(const GroupActivityLog &log,
                                       const ReactionWeights &weights) {
    std::vector<double> boosts(log.contents().size(), 1.0);
    return assemble(log, boosts, weights, 1);
}

DegreeMode parse_degree_mode(std::string_view name) {
    if (name == "in")
        return DegreeMode::in;
    if (name == "out")
        return DegreeMode::out;
    if (name == "total")
        return DegreeMode::total;
    throw InvalidArgument("degree mode must be in, out or total");
}

std::string_view degree_mode_name(DegreeMode mode) {
    switch (mode) {
    case DegreeMode::in:
        return "in";
    case DegreeMode::out:
        return "out";
    case DegreeMode::total:
        return "total";
    }
    return "total";
}

std::size_t degree(const InteractionGraph &graph, NodeIndex v, DegreeMode mode) {
    switch (mode) {
    case DegreeMode::in:
        return graph.in_arcs(v).size();
    case DegreeMode::out:
        return graph.out_arcs(v).size();
    case DegreeMode::total:
        return graph.in_arcs(v).size() + graph.out_arcs(v).size();
    }
    return 0;
}

DegreeHistogram degree_distribution(const InteractionGraph &graph, DegreeMode mode) {
    DegreeHistogram hist;
    hist.mode = mode;
    for (NodeIndex v = 0; v < graph.node_count(); ++v)
        ++hist.buckets[degree(graph, v, mode)];
    const double n = static_cast<double>(graph.node_count());
    std::size_t at_least = graph.node_count();
    for (const auto &[d, count] : hist.buckets) {
        hist.ccdf[d] = static_cast<double>(at_least) / n;
        at_least -= count;
    }
    return hist;
}

std::optional<double> ccdf_tail_slope(const DegreeHistogram &hist, std::size_t min_degree) {
    std::vector<std::pair<double, double>> points;
    for (const auto &[d, p] : hist.ccdf) {
        if (d >= min_degree && d > 0 && p > 0.0)
            points.emplace_back(std::log(static_cast<double>(d)), std::log(p));
    }
    if (points.size() < 2)
        return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (const auto &[x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= points.size();
    my /= points.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto &[x, y] : points) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0)
        return std::nullopt;
    return sxy / sxx;
}

void write_degree_histogram(std::ostream &out, const DegreeHistogram &hist) {
    out << "degree\tcount\tccdf\n";
    for (const auto &[d, count] : hist.buckets)
        out << d << '\t' << count << '\t' << format_double(hist.ccdf.at(d)) << '\n';
}

GraphFormat parse_graph_format(std::string_view name) {
    if (name == "edge-list")
        return GraphFormat::edge_list;
    if (name == "dot")
        return GraphFormat::dot;
    throw UnsupportedFormat(std::string(name));
}

void export_graph(std::ostream &out, const InteractionGraph &graph, GraphFormat format) {
    std::ostringstream buf;
    const auto edges = graph.edges();
    if (format == GraphFormat::edge_list) {
        buf << "nodes " << graph.node_count() << '\n';
        for (const auto &id : graph.nodes())
            buf << id << '\n';
        buf << "edges " << edges.size() << '\n';
        for (const auto &e : edges)
            buf << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << '\n';
    } else {
        auto quote = [](const std::string &id) {
            std::string q = "\"";
            for (char c : id) {
                if (c == '"' || c == '\\')
                    q.push_back('\\');
                q.push_back(c);
            }
            return q + '"';
        };
        buf << "digraph interaction {\n";
        for (const auto &id : graph.nodes())
            buf << "  " << quote(id) << ";\n";
        for (const auto &e : edges)
            buf << "  " << quote(e.src) << " -> " << quote(e.dst)
                << " [weight=" << format_double(e.weight) << "];\n";
        buf << "}\n";
    }
    out << buf.str();
}

InteractionGraph read_edge_list(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty())
                return true;
        }
        return false;
    };
    auto header = [&](std::string_view key) {
        if (!next())
            throw MalformedRecord(line_no, "missing '" + std::string(key) + "' header");
        std::istringstream fields(line);
        std::string word;
        long long count = -1;
        std::string extra;
        if (!(fields >> word >> count) || word != key || count < 0 || (fields >> extra))
            throw MalformedRecord(line_no, "expected '" + std::string(key) + " <count>'");
        return static_cast<std::size_t>(count);
    };

    const std::size_t n = header("nodes");
    std::vector<UserId> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!next())
            throw MalformedRecord(line_no, "fewer node lines than declared");
        if (!is_valid_id(line))
            throw MalformedRecord(line_no, "invalid node id");
        nodes.push_back(line);
    }
    const std::unordered_set<std::string> known(nodes.begin(), nodes.end());
    const std::size_t m = header("edges");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!next())
            throw MalformedRecord(line_no, "fewer edge lines than declared");
        std::istringstream fields(line);
        Edge e;
        std::string weight, extra;
        if (!(fields >> e.src >> e.dst >> weight) || (fields >> extra) ||
            !parse_double(weight, e.weight))
            throw MalformedRecord(line_no, "expected 'src dst weight'");
        for (const auto *end : {&e.src, &e.dst}) {
            if (!known.contains(*end))
                throw DanglingReference(line_no, "edge", *end);
        }
        edges.push_back(std::move(e));
    }
    if (next())
        throw MalformedRecord(line_no, "unexpected trailing content");
    try {
        return InteractionGraph(std::move(nodes), edges);
    } catch (const InvalidArgument &e) {
        throw MalformedRecord(line_no, e.what());
    }
}

} // namespace womgraph
