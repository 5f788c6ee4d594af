#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "womgraph/authority.hpp"
#include "womgraph/graph.hpp"
#include "womgraph/ingest.hpp"
#include "womgraph/relevance.hpp"
#include "womgraph/text.hpp"

namespace womgraph {

enum class VoteVariant { votes, topical_votes };

/// Weighted reaction mass received per user, aligned with log.users().
struct VoteVector {
    VoteVariant variant = VoteVariant::votes;
    std::vector<UserId> users;
    std::vector<double> values;

    double of(std::string_view user) const;
};

// Sum of reaction weights over reactions on the user's content, self reactions excluded.
VoteVector votes(const GroupActivityLog &log, const ReactionWeights &weights = {});

// As votes, counting only reactions on content with nonzero topical relevance.
VoteVector topical_votes(const GroupActivityLog &log, const TopicQuery &topic,
                         const RelatednessTable &table, const Preprocessor &preprocessor,
                         const ReactionWeights &weights = {});

// Sample Pearson correlation.
double pearson(std::span<const double> x, std::span<const double> y);

// 1-based ranks in descending value order; tied values share their average rank.
std::vector<double> descending_ranks(std::span<const double> values);

struct RelevanceLabels {
    std::map<UserId, int> grades;
    std::string source;

    int grade(std::string_view user) const;
    std::size_t relevant_count() const;
};

// "user\tgrade" lines; grades are non-negative integers.
RelevanceLabels read_labels(std::istream &in, std::string source = {});

// Average precision at `cutoff` with binary relevance (grade > 0), normalized by
// min(total relevant, cutoff).
double mean_average_precision(const RankedList &ranked, const RelevanceLabels &labels,
                              std::size_t cutoff);

// Linear gain, 1/log2(position + 1) discount, normalized by the ideal ordering.
double ndcg(const RankedList &ranked, const RelevanceLabels &labels, std::size_t cutoff);

enum class CorrelationMode { value, rank };

CorrelationMode parse_correlation_mode(std::string_view name);

struct CorrelationRow {
    std::string method;
    std::size_t k = 0;
    std::optional<double> votes;         // nullopt when undefined (zero variance)
    std::optional<double> topical_votes;
};

/// For each score vector and k, correlates the scores of that method's top-k users
/// with the same users' votes and topical votes.
std::vector<CorrelationRow> correlation_table(const std::vector<ScoreVector> &method_scores,
                                              const VoteVector &votes,
                                              const VoteVector &topical,
                                              const std::vector<std::size_t> &k_values,
                                              CorrelationMode mode = CorrelationMode::value);

struct EvalContext {
    Preprocessor preprocessor;
    ReactionWeights weights;
    double alpha = kDefaultAlpha;
    AuthorityOptions authority;
    CorrelationMode mode = CorrelationMode::value;
};

std::vector<CorrelationRow> correlation_report(const InteractionGraph &graph,
                                               const GroupActivityLog &log,
                                               const TopicQuery &topic,
                                               const RelatednessTable &table,
                                               const std::vector<Method> &methods,
                                               const std::vector<std::size_t> &k_values,
                                               const EvalContext &context = {});

// Mean over topic words of their best similarity to any group-topic word, so a topic
// identical to the group topic scores self_sim.
double topic_relatedness(const TopicQuery &topic, const TopicQuery &group_topic,
                         const RelatednessTable &table);

struct TopicCorrelation {
    std::string topic;
    double mi = 0.0;
    std::optional<double> correlation;
};

/// Per topic: relatedness to the group topic and the correlation of the method's
/// top-k users (on that topic's graph) with their topical votes. Sorted by MI
/// descending, ties by topic label.
std::vector<TopicCorrelation> topic_mi_vs_correlation(const GroupActivityLog &log,
                                                      const RelatednessTable &table,
                                                      const std::vector<TopicQuery> &topics,
                                                      const TopicQuery &group_topic,
                                                      Method method, std::size_t k,
                                                      const EvalContext &context = {});

struct PrecisionRow {
    std::string method;
    std::size_t cutoff = 0;
    double map = 0.0;
    double ndcg = 0.0;
};

void write_correlation_table(std::ostream &out, const std::vector<CorrelationRow> &rows);
void write_topic_correlations(std::ostream &out, const std::vector<TopicCorrelation> &rows);
void write_precision_table(std::ostream &out, const std::vector<PrecisionRow> &rows);
void write_votes(std::ostream &out, const VoteVector &votes);

} // namespace womgraph
