#include "womgraph/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "womgraph/authority.hpp"
#include "womgraph/campaign.hpp"
#include "womgraph/config.hpp"
#include "womgraph/error.hpp"
#include "womgraph/eval.hpp"
#include "womgraph/format.hpp"
#include "womgraph/graph.hpp"
#include "womgraph/ingest.hpp"
#include "womgraph/relevance.hpp"
#include "womgraph/structure.hpp"
#include "womgraph/synth.hpp"

namespace womgraph {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> log;
    std::optional<std::string> corpus;
    std::optional<std::string> table;
    std::optional<std::string> graph;
    std::optional<std::string> topic;
    std::optional<std::string> method;
    std::optional<std::size_t> k, r, th;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::optional<std::string> labels;
    std::optional<std::string> selected;
    std::string format = "edge-list";
    std::optional<std::string> degrees;
    std::optional<std::string> bands;
    std::string event = "reactions_received";
    std::size_t months = 3;
    std::size_t top = 20;
    std::optional<std::size_t> users, posts;
    std::size_t docs = 2000;
    std::optional<std::string> corpus_out;
    bool per_user = false;
    std::string k_values = "10,50,100,200";
    std::optional<std::string> topics;
    std::optional<std::string> group_topic;
    std::string mode = "value";
    std::optional<std::size_t> min_pair_count, top_n;
};

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open " + path);
    return in;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

std::vector<std::size_t> parse_counts(const std::string &text) {
    std::vector<std::size_t> values;
    for (const auto &part : split(text, ',')) {
        std::size_t used = 0;
        std::size_t v = 0;
        try {
            v = std::stoul(part, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != part.size() || part.front() == '-' || v < 1)
            throw InvalidArgument("expected positive integers, got '" + part + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw InvalidArgument("expected at least one value");
    return values;
}

/// Shared state of one invocation: resolved config plus lazily loaded inputs.
class Session {
public:
    explicit Session(const Flags &flags) : flags_(flags) {
        if (flags.config) {
            config_ = load_config(*flags.config);
        } else if (const char *env = std::getenv("WOMGRAPH_CONFIG"); env && *env) {
            config_ = load_config(env);
        }
        if (flags.alpha)
            config_.alpha = *flags.alpha;
        if (flags.k)
            config_.reinforcement.k = *flags.k;
        if (flags.r)
            config_.reinforcement.r = *flags.r;
        if (flags.th)
            config_.reinforcement.th = *flags.th;
        if (flags.seed)
            config_.synthesis.seed = *flags.seed;
        if (flags.workers)
            config_.workers = *flags.workers;
        if (flags.min_pair_count)
            config_.table.min_pair_count = *flags.min_pair_count;
        if (flags.top_n)
            config_.table.top_n_per_word = *flags.top_n;
        if (flags.users)
            config_.synthesis.n_users = *flags.users;
        if (flags.posts)
            config_.synthesis.n_posts = *flags.posts;
        if (flags.group_topic)
            config_.group_topic = *flags.group_topic;
        if (flags.method)
            config_.method = parse_method(split(*flags.method, ',').at(0));
        config_.validate();
        preprocessor_ = config_.preprocessor();
    }

    const Config &config() const { return config_; }
    const Preprocessor &preprocessor() const { return preprocessor_; }

    std::vector<Method> methods() const {
        if (!flags_.method)
            return {config_.method};
        std::vector<Method> out;
        for (const auto &name : split(*flags_.method, ','))
            out.push_back(parse_method(name));
        return out;
    }

    bool has_log() const { return flags_.log.has_value(); }

    const GroupActivityLog &log() {
        if (!log_) {
            if (!flags_.log)
                throw InvalidArgument("--log is required");
            auto in = open_input(*flags_.log);
            log_ = parse_activity_log(in);
        }
        return *log_;
    }

    std::optional<TopicQuery> topic() const {
        if (!flags_.topic)
            return std::nullopt;
        return TopicQuery::parse(*flags_.topic, preprocessor_);
    }

    TopicQuery require_topic() const {
        auto t = topic();
        if (!t)
            throw InvalidArgument("--topic is required");
        return *t;
    }

    // From --table, else built from --corpus, else from the log's own content texts.
    const RelatednessTable &table() {
        if (!table_) {
            if (flags_.table) {
                auto in = open_input(*flags_.table);
                table_ = read_relatedness_table(in);
            } else {
                Corpus corpus;
                if (flags_.corpus) {
                    auto in = open_input(*flags_.corpus);
                    corpus = read_corpus(in, preprocessor_);
                } else {
                    for (const auto &item : log().contents())
                        corpus.push_back(preprocessor_(item.text));
                }
                TableParams params = config_.table;
                params.workers = config_.workers;
                table_ = build_relatedness_table(corpus, params);
            }
        }
        return *table_;
    }

    // From --graph, else built from the log (topic-boosted when --topic is given).
    const InteractionGraph &graph() {
        if (!graph_) {
            if (flags_.graph) {
                auto in = open_input(*flags_.graph);
                graph_ = read_edge_list(in);
            } else if (auto t = topic()) {
                GraphBuildOptions options{config_.weights, config_.alpha, config_.workers};
                graph_ = build_interaction_graph(log(), *t, table(), preprocessor_, options);
            } else {
                graph_ = build_unboosted_graph(log(), config_.weights);
            }
        }
        return *graph_;
    }

    ScoreVector scores(Method method, std::ostream &err) {
        const GroupActivityLog *log_ptr = nullptr;
        if (method == Method::zscore || !flags_.graph)
            log_ptr = &log();
        auto s = compute_scores(method, graph(), log_ptr, config_.authority());
        if (!s.convergence.converged)
            err << "warning: " << s.method << " did not converge after "
                << s.convergence.iterations << " iterations (residual "
                << format_double(s.convergence.residual) << ")\n";
        return s;
    }

private:
    const Flags &flags_;
    Config config_;
    Preprocessor preprocessor_;
    std::optional<GroupActivityLog> log_;
    std::optional<RelatednessTable> table_;
    std::optional<InteractionGraph> graph_;
};

void emit(const Flags &flags, std::ostream &out, const std::string &content) {
    if (flags.out)
        write_file_atomically(*flags.out, content);
    else
        out << content;
}

std::vector<UserId> read_user_list(const std::string &path) {
    auto in = open_input(path);
    std::vector<UserId> users;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            users.push_back(line);
    }
    return users;
}

using Handler = std::function<std::string(Session &, std::ostream &)>;

std::string cmd_ingest_validate(Session &s, std::ostream &) {
    const auto &log = s.log();
    std::size_t posts = 0;
    for (const auto &item : log.contents())
        posts += item.kind == ContentKind::post;
    std::ostringstream buf;
    buf << "users\t" << log.users().size() << "\nposts\t" << posts << "\ncomments\t"
        << log.contents().size() - posts << "\nreactions\t" << log.reactions().size() << '\n';
    return buf.str();
}

std::string cmd_build_table(Session &s, std::ostream &) {
    std::ostringstream buf;
    write_relatedness_table(buf, s.table());
    return buf.str();
}

std::string cmd_relevance(Session &s, std::ostream &) {
    const auto topic = s.require_topic();
    const auto &table = s.table();
    std::ostringstream buf;
    buf << "content\tauthor\trelevance\tboost\n";
    for (const auto &item : s.log().contents()) {
        const double rel = content_relevance(s.preprocessor()(item.text), topic, table);
        buf << item.id << '\t' << item.author << '\t' << format_double(rel) << '\t'
            << format_double(boosted_relevance(rel, s.config().alpha)) << '\n';
    }
    return buf.str();
}

std::string cmd_graph(Session &s, const Flags &flags) {
    std::ostringstream buf;
    if (flags.degrees)
        write_degree_histogram(buf, degree_distribution(s.graph(), parse_degree_mode(*flags.degrees)));
    else
        export_graph(buf, s.graph(), GraphFormat::edge_list);
    return buf.str();
}

std::string cmd_export(Session &s, const Flags &flags) {
    std::ostringstream buf;
    export_graph(buf, s.graph(), parse_graph_format(flags.format));
    return buf.str();
}

std::string cmd_rank(Session &s, std::ostream &err) {
    std::ostringstream buf;
    write_ranking(buf, top_k(s.scores(s.config().method, err), s.config().reinforcement.k));
    return buf.str();
}

std::string cmd_bowtie(Session &s, const Flags &flags) {
    std::ostringstream buf;
    write_bowtie_report(buf, bowtie_decompose(s.graph()), flags.per_user);
    return buf.str();
}

std::string cmd_wcc(Session &s, std::ostream &) {
    std::ostringstream buf;
    write_components(buf, weakly_connected_components(s.graph()));
    return buf.str();
}

void warn_empty_bands(const std::vector<MonthlyProfile> &profiles, std::ostream &err) {
    for (const auto &p : profiles)
        if (p.empty())
            err << "warning: rank band " << p.band << " has no events; its profile is all zero\n";
}

std::vector<RankBand> bands_for(const Session &s, const Flags &flags) {
    if (flags.bands)
        return parse_bands(*flags.bands);
    return {RankBand{1, s.config().reinforcement.k}};
}

std::string cmd_campaign(Session &s, const Flags &flags, std::ostream &err) {
    const auto scores = s.scores(s.config().method, err);
    auto plan = reinforced_selection(s.graph(), scores, s.config().reinforcement);
    if (s.has_log()) {
        const auto ranking = top_k(scores, std::max<std::size_t>(1, scores.size()));
        const auto profiles = monthly_activity_profile(s.log(), ranking, bands_for(s, flags),
                                                       parse_profile_event(flags.event));
        warn_empty_bands(profiles, err);
        const bool any = std::any_of(profiles.begin(), profiles.end(),
                                     [](const MonthlyProfile &p) { return !p.empty(); });
        if (any)
            plan.recommended_months = best_promotion_window(profiles, flags.months);
    }
    if (plan.budget_infeasible)
        err << "warning: targeted sub-groups need more than k=" << s.config().reinforcement.k
            << " influencers; smaller sub-groups were skipped\n";
    std::ostringstream buf;
    write_campaign_report(buf, plan);
    return buf.str();
}

std::string cmd_coverage(Session &s, const Flags &flags, std::ostream &err) {
    std::vector<UserId> selected;
    if (flags.selected) {
        selected = read_user_list(*flags.selected);
    } else {
        for (const auto &e : top_k(s.scores(s.config().method, err), s.config().reinforcement.k))
            selected.push_back(e.user);
    }
    std::ostringstream buf;
    buf << "selected\t" << selected.size() << "\ncoverage\t"
        << format_double(coverage_estimate(s.graph(), selected)) << '\n';
    return buf.str();
}

std::string cmd_profile(Session &s, const Flags &flags, std::ostream &err) {
    const auto scores = s.scores(s.config().method, err);
    const auto ranking = top_k(scores, std::max<std::size_t>(1, scores.size()));
    const auto profiles = monthly_activity_profile(s.log(), ranking, bands_for(s, flags),
                                                   parse_profile_event(flags.event));
    warn_empty_bands(profiles, err);
    std::ostringstream buf;
    write_profiles(buf, profiles);
    return buf.str();
}

std::string cmd_eval(Session &s, const Flags &flags, std::ostream &err) {
    const auto k_values = parse_counts(flags.k_values);
    const auto methods = s.methods();
    EvalContext context{s.preprocessor(), s.config().weights, s.config().alpha,
                        s.config().authority(), parse_correlation_mode(flags.mode)};
    std::ostringstream buf;
    if (flags.labels) {
        auto in = open_input(*flags.labels);
        const auto labels = read_labels(in, *flags.labels);
        std::vector<PrecisionRow> rows;
        for (Method m : methods) {
            const auto scores = s.scores(m, err);
            const auto ranking = top_k(scores, std::max<std::size_t>(1, scores.size()));
            for (std::size_t cutoff : k_values)
                rows.push_back({scores.method, cutoff,
                                mean_average_precision(ranking, labels, cutoff),
                                ndcg(ranking, labels, cutoff)});
        }
        write_precision_table(buf, rows);
    } else if (flags.topics) {
        if (!s.config().group_topic)
            throw InvalidArgument("topic comparison needs group_topic in the config or --group-topic");
        const auto group = TopicQuery::parse(*s.config().group_topic, s.preprocessor());
        std::vector<TopicQuery> topics;
        for (const auto &raw : split(*flags.topics, ';'))
            topics.push_back(TopicQuery::parse(raw, s.preprocessor()));
        const std::size_t k = flags.k ? *flags.k : k_values.front();
        write_topic_correlations(buf, topic_mi_vs_correlation(s.log(), s.table(), topics, group,
                                                              methods.front(), k, context));
    } else {
        const auto topic = s.require_topic();
        std::vector<ScoreVector> scores;
        for (Method m : methods)
            scores.push_back(s.scores(m, err));
        write_correlation_table(
            buf, correlation_table(scores, votes(s.log(), context.weights),
                                   topical_votes(s.log(), topic, s.table(), context.preprocessor,
                                                 context.weights),
                                   k_values, context.mode));
    }
    return buf.str();
}

std::string cmd_topics(Session &s, const Flags &flags) {
    std::ostringstream buf;
    write_topics(buf, extract_popular_topics(s.log(), s.preprocessor(), flags.top));
    return buf.str();
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Topic-aware influencer analysis for online social groups", "womgraph"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", flags.config, "Config file (default: $WOMGRAPH_CONFIG)");
        cmd->add_option("--out", flags.out, "Output file (default: stdout)");
        cmd->add_option("--workers", flags.workers, "Worker threads");
    };
    auto add_log = [&](CLI::App *cmd) {
        cmd->add_option("--log", flags.log, "Activity log (line-delimited JSON)");
    };
    auto add_table_inputs = [&](CLI::App *cmd) {
        cmd->add_option("--table", flags.table, "Relatedness table file");
        cmd->add_option("--corpus", flags.corpus, "Corpus to build the relatedness table from");
        cmd->add_option("--min-pair-count", flags.min_pair_count, "Minimum pair document count");
        cmd->add_option("--top-n", flags.top_n, "Partners kept per word");
    };
    auto add_graph_inputs = [&](CLI::App *cmd) {
        cmd->add_option("--graph", flags.graph, "Edge-list graph file");
        add_log(cmd);
        cmd->add_option("--topic", flags.topic, "Topic words");
        cmd->add_option("--alpha", flags.alpha, "Topical boost strength");
        add_table_inputs(cmd);
    };
    auto add_method = [&](CLI::App *cmd) {
        cmd->add_option("--method", flags.method,
                        "pagerank|hits|zscore|eigen|betweenness|closeness");
    };

    struct Entry {
        CLI::App *cmd;
        Handler handler;
    };
    std::vector<Entry> entries;
    auto add = [&](const std::string &name, const std::string &help, Handler handler) {
        CLI::App *cmd = app.add_subcommand(name, help);
        add_common(cmd);
        entries.push_back({cmd, std::move(handler)});
        return cmd;
    };

    auto *c = add("ingest-validate", "Validate an activity log and summarize it", cmd_ingest_validate);
    add_log(c);

    c = add("build-table", "Build a word relatedness table from a corpus", cmd_build_table);
    add_table_inputs(c);
    add_log(c);

    c = add("relevance", "Topical relevance and boost of every content item", cmd_relevance);
    add_log(c);
    c->add_option("--topic", flags.topic, "Topic words");
    c->add_option("--alpha", flags.alpha, "Topical boost strength");
    add_table_inputs(c);

    c = add("graph", "Build the interaction graph (edge list or degree histogram)",
            [&](Session &s, std::ostream &) { return cmd_graph(s, flags); });
    add_graph_inputs(c);
    c->add_option("--degrees", flags.degrees, "Emit the in|out|total degree histogram instead");

    c = add("export", "Export the interaction graph",
            [&](Session &s, std::ostream &) { return cmd_export(s, flags); });
    add_graph_inputs(c);
    c->add_option("--format", flags.format, "edge-list|dot");

    c = add("rank", "Rank users by an authority method", cmd_rank);
    add_graph_inputs(c);
    add_method(c);
    c->add_option("--k", flags.k, "Number of users");

    c = add("bowtie", "Bow-tie decomposition",
            [&](Session &s, std::ostream &) { return cmd_bowtie(s, flags); });
    add_graph_inputs(c);
    c->add_flag("--per-user", flags.per_user, "Also list each user's class");

    c = add("wcc", "Weakly connected components", cmd_wcc);
    add_graph_inputs(c);

    c = add("campaign", "Reinforced influencer selection and promotion window",
            [&](Session &s, std::ostream &e) { return cmd_campaign(s, flags, e); });
    add_graph_inputs(c);
    add_method(c);
    c->add_option("--k", flags.k, "Influencer budget");
    c->add_option("--r", flags.r, "Influencers per sub-group");
    c->add_option("--th", flags.th, "Minimum sub-group size");
    c->add_option("--bands", flags.bands, "Rank bands for the monthly profile, e.g. 1-20,21-100");
    c->add_option("--event", flags.event, "posts|reactions_received");
    c->add_option("--months", flags.months, "Number of recommended months");

    c = add("coverage", "Influence coverage of a user set",
            [&](Session &s, std::ostream &e) { return cmd_coverage(s, flags, e); });
    add_graph_inputs(c);
    add_method(c);
    c->add_option("--k", flags.k, "Top-k users when --selected is absent");
    c->add_option("--selected", flags.selected, "File with one user id per line");

    c = add("profile", "Monthly activity profile per rank band",
            [&](Session &s, std::ostream &e) { return cmd_profile(s, flags, e); });
    add_graph_inputs(c);
    add_method(c);
    c->add_option("--k", flags.k, "Default band is 1-k");
    c->add_option("--bands", flags.bands, "Rank bands, e.g. 1-200,201-500");
    c->add_option("--event", flags.event, "posts|reactions_received");

    c = add("eval", "Correlation, precision or topic-relatedness evaluation",
            [&](Session &s, std::ostream &e) { return cmd_eval(s, flags, e); });
    add_graph_inputs(c);
    c->add_option("--method", flags.method, "Comma-separated methods");
    c->add_option("--k", flags.k, "Top-k for the topic comparison");
    c->add_option("--k-values", flags.k_values, "Comma-separated k values or cutoffs");
    c->add_option("--labels", flags.labels, "Label file (user<TAB>grade): report MAP and NDCG");
    c->add_option("--topics", flags.topics, "Semicolon-separated topics to compare");
    c->add_option("--group-topic", flags.group_topic, "Group topic words");
    c->add_option("--mode", flags.mode, "value|rank correlation");

    c = add("topics", "Most frequent terms in posts",
            [&](Session &s, std::ostream &) { return cmd_topics(s, flags); });
    add_log(c);
    c->add_option("--top", flags.top, "Number of terms");

    CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic activity log");
    add_common(synth);
    synth->add_option("--seed", flags.seed, "Random seed");
    synth->add_option("--users", flags.users, "Number of users");
    synth->add_option("--posts", flags.posts, "Number of posts");
    synth->add_option("--corpus-out", flags.corpus_out, "Also write a matching corpus here");
    synth->add_option("--docs", flags.docs, "Documents in the corpus");

    std::vector<std::string> argv_storage{"womgraph"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_storage)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        Session session(flags);
        if (synth->parsed()) {
            std::ostringstream log_text;
            write_activity_log(log_text, synth_generate(session.config().synthesis));
            std::string corpus_text;
            if (flags.corpus_out)
                for (const auto &doc : synth_corpus(session.config().synthesis, flags.docs))
                    corpus_text += doc + '\n';
            emit(flags, out, log_text.str());
            if (flags.corpus_out)
                write_file_atomically(*flags.corpus_out, corpus_text);
            return 0;
        }
        for (const auto &entry : entries) {
            if (entry.cmd->parsed()) {
                emit(flags, out, entry.handler(session, err));
                return 0;
            }
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace womgraph
