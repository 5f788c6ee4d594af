#include "womgraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

double VoteVector::of(std::string_view user) const {
    auto it = std::lower_bound(users.begin(), users.end(), user);
    if (it == users.end() || *it != user)
        throw UnknownUser(std::string(user));
    return values[static_cast<std::size_t>(it - users.begin())];
}

namespace {

VoteVector tally(const GroupActivityLog &log, const ReactionWeights &weights,
                 const std::vector<char> *counted, VoteVariant variant) {
    weights.validate();
    VoteVector out{variant, log.users(), std::vector<double>(log.users().size(), 0.0)};
    const auto &users = log.users();
    for (const auto &r : log.reactions()) {
        const std::size_t target = *log.content_index(r.target);
        const auto &author = log.contents()[target].author;
        if (author == r.reactor || (counted && !(*counted)[target]))
            continue;
        auto idx = std::lower_bound(users.begin(), users.end(), author) - users.begin();
        out.values[static_cast<std::size_t>(idx)] += weights.of(r.kind);
    }
    return out;
}

} // namespace

VoteVector votes(const GroupActivityLog &log, const ReactionWeights &weights) {
    return tally(log, weights, nullptr, VoteVariant::votes);
}

VoteVector topical_votes(const GroupActivityLog &log, const TopicQuery &topic,
                         const RelatednessTable &table, const Preprocessor &preprocessor,
                         const ReactionWeights &weights) {
    std::vector<char> relevant;
    relevant.reserve(log.contents().size());
    for (const auto &item : log.contents())
        relevant.push_back(content_relevance(preprocessor(item.text), topic, table) > 0.0);
    return tally(log, weights, &relevant, VoteVariant::topical_votes);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw LengthMismatch(x.size(), y.size());
    const auto n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw ZeroVariance();
    const long double r = sxy / std::sqrt(sxx * syy);
    return static_cast<double>(std::clamp<long double>(r, -1.0L, 1.0L));
}

std::vector<double> descending_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t)
            ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

int RelevanceLabels::grade(std::string_view user) const {
    auto it = grades.find(std::string(user));
    return it == grades.end() ? 0 : it->second;
}

std::size_t RelevanceLabels::relevant_count() const {
    return static_cast<std::size_t>(
        std::count_if(grades.begin(), grades.end(), [](const auto &g) { return g.second > 0; }));
}

RelevanceLabels read_labels(std::istream &in, std::string source) {
    RelevanceLabels labels;
    labels.source = std::move(source);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw MalformedRecord(line_no, "expected user\\tgrade");
        const std::string user = line.substr(0, tab);
        const std::string grade = line.substr(tab + 1);
        if (!is_valid_id(user))
            throw MalformedRecord(line_no, "invalid user id");
        if (grade.empty() || !std::all_of(grade.begin(), grade.end(),
                                          [](char c) { return c >= '0' && c <= '9'; }) ||
            grade.size() > 9)
            throw MalformedRecord(line_no, "grade must be a non-negative integer");
        if (!labels.grades.emplace(user, std::stoi(grade)).second)
            throw MalformedRecord(line_no, "duplicate label for '" + user + "'");
    }
    return labels;
}

double mean_average_precision(const RankedList &ranked, const RelevanceLabels &labels,
                              std::size_t cutoff) {
    if (cutoff < 1)
        throw InvalidArgument("cutoff must be at least 1");
    const std::size_t relevant = labels.relevant_count();
    if (relevant == 0)
        throw NoRelevantUsers();
    // Extended precision so that short lists round once, e.g. [R,N,R] gives 5/6 exactly.
    long double sum = 0.0L;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size() && i < cutoff; ++i) {
        if (labels.grade(ranked[i].user) > 0) {
            ++hits;
            sum += static_cast<long double>(hits) / static_cast<long double>(i + 1);
        }
    }
    return static_cast<double>(sum / static_cast<long double>(std::min(relevant, cutoff)));
}

double ndcg(const RankedList &ranked, const RelevanceLabels &labels, std::size_t cutoff) {
    if (cutoff < 1)
        throw InvalidArgument("cutoff must be at least 1");
    auto discount = [](std::size_t position) { return 1.0 / std::log2(position + 1.0); };
    std::vector<int> ideal;
    for (const auto &[user, g] : labels.grades)
        if (g > 0)
            ideal.push_back(g);
    if (ideal.empty())
        throw NoRelevantUsers();
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size() && i < cutoff; ++i)
        idcg += ideal[i] * discount(i + 1);
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranked.size() && i < cutoff; ++i)
        dcg += labels.grade(ranked[i].user) * discount(i + 1);
    return std::min(1.0, dcg / idcg);
}

CorrelationMode parse_correlation_mode(std::string_view name) {
    if (name == "value")
        return CorrelationMode::value;
    if (name == "rank")
        return CorrelationMode::rank;
    throw InvalidArgument("correlation mode must be value or rank");
}

namespace {

std::optional<double> correlate(std::vector<double> x, std::vector<double> y,
                                CorrelationMode mode) {
    if (x.size() < 2)
        return std::nullopt;
    if (mode == CorrelationMode::rank) {
        x = descending_ranks(x);
        y = descending_ranks(y);
    }
    try {
        return pearson(x, y);
    } catch (const ZeroVariance &) {
        return std::nullopt;
    }
}

} // namespace

std::vector<CorrelationRow> correlation_table(const std::vector<ScoreVector> &method_scores,
                                              const VoteVector &votes,
                                              const VoteVector &topical,
                                              const std::vector<std::size_t> &k_values,
                                              CorrelationMode mode) {
    std::vector<CorrelationRow> rows;
    for (const auto &scores : method_scores) {
        for (std::size_t k : k_values) {
            const auto top = top_k(scores, k);
            std::vector<double> s, v, t;
            for (const auto &entry : top) {
                s.push_back(entry.score);
                v.push_back(votes.of(entry.user));
                t.push_back(topical.of(entry.user));
            }
            rows.push_back({scores.method, k, correlate(s, v, mode), correlate(s, t, mode)});
        }
    }
    return rows;
}

std::vector<CorrelationRow> correlation_report(const InteractionGraph &graph,
                                               const GroupActivityLog &log,
                                               const TopicQuery &topic,
                                               const RelatednessTable &table,
                                               const std::vector<Method> &methods,
                                               const std::vector<std::size_t> &k_values,
                                               const EvalContext &context) {
    std::vector<ScoreVector> scores;
    for (Method m : methods)
        scores.push_back(compute_scores(m, graph, &log, context.authority));
    return correlation_table(scores, votes(log, context.weights),
                             topical_votes(log, topic, table, context.preprocessor, context.weights),
                             k_values, context.mode);
}

double topic_relatedness(const TopicQuery &topic, const TopicQuery &group_topic,
                         const RelatednessTable &table) {
    double sum = 0.0;
    for (const auto &word : topic.words()) {
        double best = 0.0;
        for (const auto &g : group_topic.words())
            best = std::max(best, table.similarity(g, word));
        sum += best;
    }
    return sum / static_cast<double>(topic.words().size());
}

std::vector<TopicCorrelation> topic_mi_vs_correlation(const GroupActivityLog &log,
                                                      const RelatednessTable &table,
                                                      const std::vector<TopicQuery> &topics,
                                                      const TopicQuery &group_topic,
                                                      Method method, std::size_t k,
                                                      const EvalContext &context) {
    std::vector<TopicCorrelation> rows;
    GraphBuildOptions build{context.weights, context.alpha, context.authority.workers};
    for (const auto &topic : topics) {
        const auto graph = build_interaction_graph(log, topic, table, context.preprocessor, build);
        const auto scores = compute_scores(method, graph, &log, context.authority);
        const auto topical =
            topical_votes(log, topic, table, context.preprocessor, context.weights);
        std::vector<double> s, t;
        for (const auto &entry : top_k(scores, k)) {
            s.push_back(entry.score);
            t.push_back(topical.of(entry.user));
        }
        rows.push_back({topic.label(), topic_relatedness(topic, group_topic, table),
                        correlate(std::move(s), std::move(t), context.mode)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        if (a.mi != b.mi)
            return a.mi > b.mi;
        return a.topic < b.topic;
    });
    return rows;
}

namespace {

std::string optional_cell(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string("NA");
}

} // namespace

void write_correlation_table(std::ostream &out, const std::vector<CorrelationRow> &rows) {
    std::ostringstream buf;
    buf << "method\tk\tvotes\ttopical_votes\n";
    for (const auto &r : rows)
        buf << r.method << '\t' << r.k << '\t' << optional_cell(r.votes) << '\t'
            << optional_cell(r.topical_votes) << '\n';
    out << buf.str();
}

void write_topic_correlations(std::ostream &out, const std::vector<TopicCorrelation> &rows) {
    std::ostringstream buf;
    buf << "topic\tmi\tcorrelation\n";
    for (const auto &r : rows)
        buf << r.topic << '\t' << format_double(r.mi) << '\t' << optional_cell(r.correlation)
            << '\n';
    out << buf.str();
}

void write_precision_table(std::ostream &out, const std::vector<PrecisionRow> &rows) {
    std::ostringstream buf;
    buf << "method\tcutoff\tmap\tndcg\n";
    for (const auto &r : rows)
        buf << r.method << '\t' << r.cutoff << '\t' << format_double(r.map) << '\t'
            << format_double(r.ndcg) << '\n';
    out << buf.str();
}

void write_votes(std::ostream &out, const VoteVector &votes) {
    std::ostringstream buf;
    buf << "user\t" << (votes.variant == VoteVariant::votes ? "votes" : "topical_votes") << '\n';
    for (std::size_t i = 0; i < votes.users.size(); ++i)
        buf << votes.users[i] << '\t' << format_double(votes.values[i]) << '\n';
    out << buf.str();
}

} // namespace womgraph
