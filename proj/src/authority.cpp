#include "womgraph/authority.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

Method parse_method(std::string_view name) {
    if (name == "pagerank")
        return Method::pagerank;
    if (name == "hits")
        return Method::hits;
    if (name == "zscore")
        return Method::zscore;
    if (name == "eigen")
        return Method::eigen;
    if (name == "betweenness")
        return Method::betweenness;
    if (name == "closeness")
        return Method::closeness;
    throw InvalidArgument("unknown method '" + std::string(name) +
                          "' (expected pagerank, hits, zscore, eigen, betweenness or closeness)");
}

std::string_view method_name(Method method) {
    switch (method) {
    case Method::pagerank:
        return "pagerank";
    case Method::hits:
        return "hits";
    case Method::zscore:
        return "zscore";
    case Method::eigen:
        return "eigen";
    case Method::betweenness:
        return "betweenness";
    case Method::closeness:
        return "closeness";
    }
    return "unknown";
}

double ScoreVector::score_of(std::string_view user) const {
    auto it = std::lower_bound(users.begin(), users.end(), user);
    if (it == users.end() || *it != user)
        throw UnknownUser(std::string(user));
    return scores[static_cast<std::size_t>(it - users.begin())];
}

void PowerIterationParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0))
        throw InvalidArgument("damping must lie in (0, 1)");
    if (!(tol > 0.0))
        throw InvalidArgument("tolerance must be positive");
    if (max_iter < 1)
        throw InvalidArgument("max_iter must be at least 1");
}

namespace {

void require_nonempty(const InteractionGraph &graph) {
    if (graph.empty())
        throw InvalidArgument("graph has no nodes");
}

void require_iteration_limits(double tol, std::size_t max_iter) {
    if (!(tol > 0.0))
        throw InvalidArgument("tolerance must be positive");
    if (max_iter < 1)
        throw InvalidArgument("max_iter must be at least 1");
}

ScoreVector make_scores(const InteractionGraph &graph, std::string method,
                        std::vector<double> values) {
    return {std::move(method), graph.nodes(), std::move(values), {}};
}

// Returns the L2 norm after scaling `x` to unit length; zero vectors are left alone.
double normalize_l2(std::vector<double> &x) {
    double sq = 0.0;
    for (double v : x)
        sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm > 0.0)
        for (double &v : x)
            v /= norm;
    return norm;
}

double l2_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq);
}

} // namespace

ScoreVector pagerank(const InteractionGraph &graph, const PowerIterationParams &params) {
    params.validate();
    require_nonempty(graph);
    const std::size_t n = graph.node_count();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> rank(n, inv_n), next(n);

    ConvergenceInfo info{false, 0.0, 0};
    while (info.iterations < params.max_iter) {
        double dangling = 0.0;
        for (NodeIndex u = 0; u < n; ++u)
            if (graph.out_arcs(u).empty())
                dangling += rank[u];
        const double base = (1.0 - params.damping) * inv_n + params.damping * dangling * inv_n;
        for (NodeIndex v = 0; v < n; ++v) {
            double flow = 0.0;
            for (const auto &a : graph.in_arcs(v))
                flow += rank[a.node] * a.weight / graph.out_weight(a.node);
            next[v] = base + params.damping * flow;
        }
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            residual += std::abs(next[v] - rank[v]);
        rank.swap(next);
        ++info.iterations;
        info.residual = residual;
        if (residual < params.tol) {
            info.converged = true;
            break;
        }
    }
    const double sum = std::accumulate(rank.begin(), rank.end(), 0.0);
    for (double &r : rank)
        r /= sum;
    auto out = make_scores(graph, "pagerank", std::move(rank));
    out.convergence = info;
    return out;
}

HitsResult hits(const InteractionGraph &graph, double tol, std::size_t max_iter) {
    require_iteration_limits(tol, max_iter);
    require_nonempty(graph);
    const std::size_t n = graph.node_count();
    const double start = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> hub(n, start), auth(n, start), next_hub(n), next_auth(n);

    ConvergenceInfo info{false, 0.0, 0};
    while (info.iterations < max_iter) {
        for (NodeIndex v = 0; v < n; ++v) {
            double s = 0.0;
            for (const auto &a : graph.in_arcs(v))
                s += a.weight * hub[a.node];
            next_auth[v] = s;
        }
        normalize_l2(next_auth);
        for (NodeIndex u = 0; u < n; ++u) {
            double s = 0.0;
            for (const auto &a : graph.out_arcs(u))
                s += a.weight * next_auth[a.node];
            next_hub[u] = s;
        }
        normalize_l2(next_hub);
        info.residual = l2_distance(next_auth, auth) + l2_distance(next_hub, hub);
        auth.swap(next_auth);
        hub.swap(next_hub);
        ++info.iterations;
        if (info.residual < tol) {
            info.converged = true;
            break;
        }
    }
    HitsResult result{make_scores(graph, "hits-hub", std::move(hub)),
                      make_scores(graph, "hits", std::move(auth))};
    result.hubs.convergence = info;
    result.authorities.convergence = info;
    return result;
}

ScoreVector eigenvector_centrality(const InteractionGraph &graph, double tol,
                                   std::size_t max_iter) {
    require_iteration_limits(tol, max_iter);
    require_nonempty(graph);
    if (graph.edge_count() == 0)
        throw ZeroVector();
    const std::size_t n = graph.node_count();
    double max_weight = 0.0;
    for (NodeIndex v = 0; v < n; ++v)
        for (const auto &a : graph.out_arcs(v))
            max_weight = std::max(max_weight, a.weight);

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), next(n);
    ConvergenceInfo info{false, 0.0, 0};
    while (info.iterations < max_iter) {
        for (NodeIndex v = 0; v < n; ++v) {
            double s = 0.0;
            for (const auto &a : graph.in_arcs(v))
                s += (a.weight / max_weight) * x[a.node];
            next[v] = x[v] + s;
        }
        normalize_l2(next);
        info.residual = l2_distance(next, x);
        x.swap(next);
        ++info.iterations;
        if (info.residual < tol) {
            info.converged = true;
            break;
        }
    }
    auto out = make_scores(graph, "eigen", std::move(x));
    out.convergence = info;
    return out;
}

namespace {

struct SingleSourceState {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<std::vector<NodeIndex>> preds;
    std::vector<NodeIndex> order; // settled nodes, nondecreasing distance

    explicit SingleSourceState(std::size_t n) : dist(n), sigma(n), delta(n), preds(n) {}
};

bool same_length(double a, double b) {
    return std::abs(a - b) <= kPathLengthEpsilon * std::max(a, b);
}

// Shortest-path DAG from `source`; dist is +inf for unreachable nodes.
void shortest_paths(const InteractionGraph &graph, NodeIndex source, bool use_weights,
                    SingleSourceState &st) {
    const std::size_t n = graph.node_count();
    std::fill(st.dist.begin(), st.dist.end(), std::numeric_limits<double>::infinity());
    std::fill(st.sigma.begin(), st.sigma.end(), 0.0);
    for (auto &p : st.preds)
        p.clear();
    st.order.clear();
    st.dist[source] = 0.0;
    st.sigma[source] = 1.0;

    if (!use_weights) {
        std::queue<NodeIndex> queue;
        queue.push(source);
        while (!queue.empty()) {
            const NodeIndex v = queue.front();
            queue.pop();
            st.order.push_back(v);
            for (const auto &a : graph.out_arcs(v)) {
                const NodeIndex w = a.node;
                if (std::isinf(st.dist[w])) {
                    st.dist[w] = st.dist[v] + 1.0;
                    queue.push(w);
                }
                if (st.dist[w] == st.dist[v] + 1.0) {
                    st.sigma[w] += st.sigma[v];
                    st.preds[w].push_back(v);
                }
            }
        }
        return;
    }

    using Item = std::pair<double, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> settled(n, 0);
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (settled[v])
            continue;
        settled[v] = 1;
        st.order.push_back(v);
        for (const auto &a : graph.out_arcs(v)) {
            const NodeIndex w = a.node;
            if (settled[w])
                continue;
            const double alt = st.dist[v] + 1.0 / a.weight;
            if (!std::isinf(st.dist[w]) && same_length(alt, st.dist[w])) {
                st.sigma[w] += st.sigma[v];
                st.preds[w].push_back(v);
            } else if (alt < st.dist[w]) {
                st.dist[w] = alt;
                st.sigma[w] = st.sigma[v];
                st.preds[w].assign(1, v);
                heap.push({alt, w});
            }
        }
    }
}

void accumulate_dependencies(const InteractionGraph &graph, NodeIndex begin, NodeIndex end,
                             bool use_weights, std::vector<double> &centrality) {
    SingleSourceState st(graph.node_count());
    for (NodeIndex s = begin; s < end; ++s) {
        shortest_paths(graph, s, use_weights, st);
        for (NodeIndex v : st.order)
            st.delta[v] = 0.0;
        for (auto it = st.order.rbegin(); it != st.order.rend(); ++it) {
            const NodeIndex w = *it;
            for (NodeIndex v : st.preds[w])
                st.delta[v] += st.sigma[v] / st.sigma[w] * (1.0 + st.delta[w]);
            if (w != s)
                centrality[w] += st.delta[w];
        }
    }
}

} // namespace

ScoreVector betweenness(const InteractionGraph &graph, bool use_weights, unsigned workers) {
    const std::size_t n = graph.node_count();
    // Sources are processed in fixed-size blocks whose partial sums are merged in block
    // order, so the floating-point result does not depend on the worker count.
    constexpr std::size_t kBlock = 32;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
    auto run_blocks = [&](std::size_t first) {
        for (std::size_t b = first; b < blocks; b += std::max(1u, workers)) {
            const auto begin = static_cast<NodeIndex>(b * kBlock);
            const auto end = static_cast<NodeIndex>(std::min(n, (b + 1) * kBlock));
            accumulate_dependencies(graph, begin, end, use_weights, partial[b]);
        }
    };
    if (workers <= 1 || blocks <= 1) {
        run_blocks(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers && w < blocks; ++w)
            threads.emplace_back(run_blocks, w);
        for (auto &t : threads)
            t.join();
    }
    std::vector<double> centrality(n, 0.0);
    for (const auto &p : partial)
        for (std::size_t v = 0; v < n; ++v)
            centrality[v] += p[v];
    return make_scores(graph, "betweenness", std::move(centrality));
}

ScoreVector closeness(const InteractionGraph &graph, bool use_weights) {
    const std::size_t n = graph.node_count();
    std::vector<double> scores(n, 0.0);
    SingleSourceState st(n);
    for (NodeIndex s = 0; s < n; ++s) {
        shortest_paths(graph, s, use_weights, st);
        double sum = 0.0;
        for (NodeIndex v = 0; v < n; ++v)
            if (v != s && !std::isinf(st.dist[v]))
                sum += 1.0 / st.dist[v];
        scores[s] = sum;
    }
    return make_scores(graph, "closeness", std::move(scores));
}

ScoreVector zscore(const GroupActivityLog &log) {
    const auto &users = log.users();
    auto index = [&](const UserId &id) {
        return static_cast<std::size_t>(std::lower_bound(users.begin(), users.end(), id) -
                                        users.begin());
    };
    std::vector<std::size_t> answers(users.size(), 0), questions(users.size(), 0);
    for (const auto &item : log.contents())
        if (item.kind == ContentKind::post)
            ++questions[index(item.author)];
    for (const auto &r : log.reactions()) {
        if (log.content(r.target).author != r.reactor)
            ++answers[index(r.reactor)];
    }
    std::vector<double> scores(users.size(), 0.0);
    for (std::size_t i = 0; i < users.size(); ++i) {
        const double a = static_cast<double>(answers[i]);
        const double q = static_cast<double>(questions[i]);
        if (a + q > 0.0)
            scores[i] = (a - q) / std::sqrt(a + q);
    }
    return {"zscore", users, std::move(scores), {}};
}

RankedList top_k(const ScoreVector &scores, std::size_t k) {
    if (k < 1)
        throw InvalidArgument("k must be at least 1");
    const auto &v = scores.scores;
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (v[a] != v[b])
            return v[a] > v[b];
        return scores.users[a] < scores.users[b];
    });
    // Runs of scores that differ only by rounding noise count as ties and are
    // ordered by user id.
    auto near = [&](double hi, double lo) {
        return hi - lo <= kTieTolerance * std::max(std::abs(hi), std::abs(lo));
    };
    for (std::size_t begin = 0; begin < order.size();) {
        std::size_t end = begin + 1;
        while (end < order.size() && near(v[order[end - 1]], v[order[end]]))
            ++end;
        if (end - begin > 1)
            std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                      order.begin() + static_cast<std::ptrdiff_t>(end),
                      [&](std::size_t a, std::size_t b) { return scores.users[a] < scores.users[b]; });
        begin = end;
    }
    const std::size_t take = std::min(k, order.size());
    RankedList out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        out.push_back({scores.users[order[i]], v[order[i]]});
    return out;
}

ScoreVector compute_scores(Method method, const InteractionGraph &graph,
                           const GroupActivityLog *log, const AuthorityOptions &options) {
    switch (method) {
    case Method::pagerank:
        return pagerank(graph, options.power);
    case Method::hits:
        return hits(graph, options.tol, options.max_iter).authorities;
    case Method::eigen:
        return eigenvector_centrality(graph, options.tol, options.max_iter);
    case Method::betweenness:
        return betweenness(graph, options.use_weights, options.workers);
    case Method::closeness:
        return closeness(graph, options.use_weights);
    case Method::zscore: {
        if (log == nullptr)
            throw InvalidArgument("zscore needs the activity log");
        const auto per_user = zscore(*log);
        std::unordered_map<std::string_view, double> by_user;
        for (std::size_t i = 0; i < per_user.size(); ++i)
            by_user.emplace(per_user.users[i], per_user.scores[i]);
        std::vector<double> aligned;
        aligned.reserve(graph.node_count());
        for (const auto &id : graph.nodes()) {
            auto it = by_user.find(id);
            aligned.push_back(it == by_user.end() ? 0.0 : it->second);
        }
        return make_scores(graph, "zscore", std::move(aligned));
    }
    }
    throw InvalidArgument("unknown method");
}

void write_ranking(std::ostream &out, const RankedList &ranking) {
    std::ostringstream buf;
    buf << "user\tscore\trank\n";
    for (std::size_t i = 0; i < ranking.size(); ++i)
        buf << ranking[i].user << '\t' << format_double(ranking[i].score) << '\t' << i + 1 << '\n';
    out << buf.str();
}

} // namespace womgraph
