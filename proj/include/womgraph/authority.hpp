#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "womgraph/graph.hpp"
#include "womgraph/ingest.hpp"

namespace womgraph {

enum class Method { pagerank, hits, zscore, eigen, betweenness, closeness };

Method parse_method(std::string_view name);
std::string_view method_name(Method method);

// Iterative methods report non-convergence here instead of throwing; the last
// iterate is still returned.
struct ConvergenceInfo {
    bool converged = true;
    double residual = 0.0;
    std::size_t iterations = 0;
};

/// Per-user scores aligned with a sorted user list (the graph's node order).
struct ScoreVector {
    std::string method;
    std::vector<UserId> users;
    std::vector<double> scores;
    ConvergenceInfo convergence;

    std::size_t size() const { return users.size(); }
    double score_of(std::string_view user) const;
};

struct RankedEntry {
    UserId user;
    double score = 0.0;

    bool operator==(const RankedEntry &) const = default;
};

// Descending score, ties by user id ascending.
using RankedList = std::vector<RankedEntry>;

struct PowerIterationParams {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 200;

    void validate() const;
};

/// Weighted PageRank. Transition u->v is weight(u,v)/out_weight(u); dangling mass and
/// teleportation are spread uniformly. Stops when the L1 change drops below tol.
ScoreVector pagerank(const InteractionGraph &graph, const PowerIterationParams &params = {});

struct HitsResult {
    ScoreVector hubs;
    ScoreVector authorities;
};

// Weighted HITS with L2 normalization after every half step.
HitsResult hits(const InteractionGraph &graph, double tol = 1e-10, std::size_t max_iter = 1000);

// Dominant eigenvector of the weighted adjacency, scores flowing to edge targets.
// Iterates x <- x + A^T x / w_max, which has the same fixed direction as A^T x but
// cannot oscillate on periodic graphs. Throws ZeroVector on an edgeless graph.
ScoreVector eigenvector_centrality(const InteractionGraph &graph, double tol = 1e-10,
                                   std::size_t max_iter = 1000);

// Relative tolerance under which two weighted path lengths count as equal.
inline constexpr double kPathLengthEpsilon = 1e-9;

// Exact Brandes betweenness over directed shortest paths, unnormalized. With
// use_weights the length of an edge is 1/weight.
ScoreVector betweenness(const InteractionGraph &graph, bool use_weights, unsigned workers = 1);

// Harmonic closeness: sum over v != u of 1/d(u, v); unreachable pairs add nothing.
ScoreVector closeness(const InteractionGraph &graph, bool use_weights);

// (a - q) / sqrt(a + q) with a = reactions given to others' content and q = posts.
ScoreVector zscore(const GroupActivityLog &log);

// Relative score gap below which two users are ranked as tied.
inline constexpr double kTieTolerance = 1e-12;

// Highest k scores, ties (within kTieTolerance) broken by ascending user id.
RankedList top_k(const ScoreVector &scores, std::size_t k);

struct AuthorityOptions {
    PowerIterationParams power;
    double tol = 1e-10;
    std::size_t max_iter = 1000;
    bool use_weights = true;
    unsigned workers = 1;
};

// Runs `method`; zscore needs the log, the others only the graph. Scores are
// aligned with the graph nodes.
ScoreVector compute_scores(Method method, const InteractionGraph &graph,
                           const GroupActivityLog *log, const AuthorityOptions &options = {});

// "user\tscore\trank" lines, rank starting at 1.
void write_ranking(std::ostream &out, const RankedList &ranking);

} // namespace womgraph
