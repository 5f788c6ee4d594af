#include "womgraph/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <unordered_map>

#include "womgraph/error.hpp"
#include "womgraph/format.hpp"

namespace womgraph {

void ReinforcementParams::validate() const {
    if (r < 1)
        throw InvalidArgument("r must be at least 1");
    if (k < r)
        throw InvalidArgument("k must be at least r");
    if (th < 1)
        throw InvalidArgument("th must be at least 1");
}

RankedList select_influencers(const InteractionGraph &graph, Method method, std::size_t k,
                              const GroupActivityLog *log, const AuthorityOptions &options) {
    if (k < 1)
        throw InvalidArgument("k must be at least 1");
    return top_k(compute_scores(method, graph, log, options), k);
}

std::vector<UserId> CampaignPlan::selected_users() const {
    std::vector<UserId> users;
    for (const auto &a : assignments)
        for (const auto &i : a.influencers)
            users.push_back(i.user);
    std::sort(users.begin(), users.end());
    return users;
}

CampaignPlan reinforced_selection(const InteractionGraph &graph, const ScoreVector &scores,
                                  const ReinforcementParams &params) {
    params.validate();
    if (scores.users != graph.nodes() || scores.scores.size() != scores.users.size())
        throw InvalidArgument("scores must cover exactly the graph nodes");

    const RankedList full = top_k(scores, std::max<std::size_t>(1, graph.node_count()));
    std::unordered_map<std::string_view, std::size_t> rank_of;
    for (std::size_t i = 0; i < full.size(); ++i)
        rank_of.emplace(full[i].user, i + 1);

    CampaignPlan plan;
    plan.global_topk.assign(full.begin(),
                            full.begin() + static_cast<std::ptrdiff_t>(std::min(params.k, full.size())));

    const auto groups = weakly_connected_components(graph);
    std::size_t budget = params.k;
    bool exhausted = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto &group = groups[g];
        if (group.size() < params.th) {
            plan.skipped.push_back({g + 1, group, std::string(kBelowThreshold)});
            continue;
        }
        const std::size_t need = std::min(params.r, group.size());
        if (exhausted || need > budget) {
            exhausted = true;
            plan.budget_infeasible = true;
            plan.skipped.push_back({g + 1, group, std::string(kBudgetExhausted)});
            continue;
        }
        std::vector<std::pair<std::size_t, std::string_view>> ranked;
        ranked.reserve(group.size());
        for (const auto &user : group.members)
            ranked.emplace_back(rank_of.at(user), user);
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(need),
                          ranked.end());
        SubGroupAssignment assignment{g + 1, group, {}};
        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t rank = ranked[i].first;
            assignment.influencers.push_back(
                {full[rank - 1].user, full[rank - 1].score, rank, rank > params.k});
        }
        budget -= need;
        plan.assignments.push_back(std::move(assignment));
    }
    plan.coverage = coverage_estimate(graph, plan.selected_users());
    return plan;
}

double coverage_estimate(const InteractionGraph &graph, const std::vector<UserId> &selected) {
    if (graph.empty())
        throw InvalidArgument("coverage needs a nonempty graph");
    std::vector<char> influenced(graph.node_count(), 0);
    for (const auto &user : selected) {
        auto v = graph.index_of(user);
        if (!v)
            throw UnknownUser(user);
        influenced[*v] = 1;
        for (const auto &a : graph.in_arcs(*v))
            influenced[a.node] = 1;
    }
    const auto count = std::count(influenced.begin(), influenced.end(), 1);
    return static_cast<double>(count) / static_cast<double>(graph.node_count());
}

std::string RankBand::label() const { return std::to_string(first) + "-" + std::to_string(last); }

std::vector<RankBand> parse_bands(std::string_view spec) {
    std::vector<RankBand> bands;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        auto comma = spec.find(',', pos);
        if (comma == std::string_view::npos)
            comma = spec.size();
        std::string item(spec.substr(pos, comma - pos));
        auto dash = item.find('-');
        RankBand band;
        try {
            std::size_t used_a = 0, used_b = 0;
            if (dash == std::string::npos)
                throw InvalidArgument("");
            band.first = std::stoul(item.substr(0, dash), &used_a);
            band.last = std::stoul(item.substr(dash + 1), &used_b);
            if (used_a != dash || used_b != item.size() - dash - 1)
                throw InvalidArgument("");
        } catch (const std::exception &) {
            throw InvalidArgument("bad rank band '" + item + "' (expected first-last)");
        }
        bands.push_back(band);
        pos = comma + 1;
    }
    return bands;
}

ProfileEvent parse_profile_event(std::string_view name) {
    if (name == "posts")
        return ProfileEvent::posts;
    if (name == "reactions_received" || name == "reactions")
        return ProfileEvent::reactions_received;
    throw InvalidArgument("profile event must be posts or reactions_received");
}

int month_of(Timestamp ts) {
    using namespace std::chrono;
    const sys_seconds t{seconds{ts}};
    const year_month_day ymd{floor<days>(t)};
    return static_cast<int>(static_cast<unsigned>(ymd.month()));
}

std::vector<MonthlyProfile> monthly_activity_profile(const GroupActivityLog &log,
                                                     const RankedList &ranking,
                                                     const std::vector<RankBand> &bands,
                                                     ProfileEvent event) {
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].first < 1 || bands[i].last < bands[i].first)
            throw InvalidArgument("rank band " + bands[i].label() + " is empty or starts below 1");
        for (std::size_t j = 0; j < i; ++j) {
            if (bands[i].first <= bands[j].last && bands[j].first <= bands[i].last)
                throw InvalidArgument("rank bands " + bands[j].label() + " and " +
                                      bands[i].label() + " overlap");
        }
    }
    std::unordered_map<std::string_view, std::size_t> band_of;
    for (std::size_t rank = 1; rank <= ranking.size(); ++rank) {
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (rank >= bands[b].first && rank <= bands[b].last) {
                band_of.emplace(ranking[rank - 1].user, b);
                break;
            }
        }
    }

    std::vector<std::array<std::size_t, 12>> counts(bands.size());
    for (auto &c : counts)
        c.fill(0);
    auto count = [&](const UserId &user, Timestamp ts) {
        auto it = band_of.find(user);
        if (it != band_of.end())
            ++counts[it->second][static_cast<std::size_t>(month_of(ts) - 1)];
    };
    if (event == ProfileEvent::posts) {
        for (const auto &item : log.contents())
            if (item.kind == ContentKind::post)
                count(item.author, item.timestamp);
    } else {
        for (const auto &r : log.reactions()) {
            const auto &author = log.content(r.target).author;
            if (author != r.reactor)
                count(author, r.timestamp);
        }
    }

    std::vector<MonthlyProfile> profiles;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        MonthlyProfile p;
        p.band = bands[b].label();
        for (auto c : counts[b])
            p.events += c;
        if (p.events > 0)
            for (std::size_t m = 0; m < 12; ++m)
                p.probabilities[m] = static_cast<double>(counts[b][m]) / static_cast<double>(p.events);
        profiles.push_back(std::move(p));
    }
    return profiles;
}

std::vector<int> best_promotion_window(const std::vector<MonthlyProfile> &profiles,
                                       std::size_t top_m) {
    if (profiles.empty())
        throw InvalidArgument("no profiles to rank months from");
    std::array<double, 12> mean{};
    for (const auto &p : profiles)
        for (std::size_t m = 0; m < 12; ++m)
            mean[m] += p.probabilities[m];
    for (auto &v : mean)
        v /= static_cast<double>(profiles.size());
    std::vector<int> months(12);
    for (int m = 0; m < 12; ++m)
        months[static_cast<std::size_t>(m)] = m + 1;
    std::stable_sort(months.begin(), months.end(), [&](int a, int b) {
        return mean[static_cast<std::size_t>(a - 1)] > mean[static_cast<std::size_t>(b - 1)];
    });
    months.resize(std::min<std::size_t>(top_m, 12));
    return months;
}

std::vector<std::pair<std::string, std::size_t>>
extract_popular_topics(const GroupActivityLog &log, const Preprocessor &preprocessor,
                       std::size_t top_n) {
    std::map<std::string, std::size_t> freq;
    for (const auto &item : log.contents()) {
        if (item.kind != ContentKind::post)
            continue;
        const auto tokens = preprocessor(item.text);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            ++freq[tokens[i]];
            if (i + 1 < tokens.size())
                ++freq[tokens[i] + " " + tokens[i + 1]];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> terms(freq.begin(), freq.end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
    terms.resize(std::min(top_n, terms.size()));
    return terms;
}

void write_campaign_report(std::ostream &out, const CampaignPlan &plan) {
    std::ostringstream buf;
    buf << "[global_topk]\nrank\tuser\tscore\n";
    for (std::size_t i = 0; i < plan.global_topk.size(); ++i)
        buf << i + 1 << '\t' << plan.global_topk[i].user << '\t'
            << format_double(plan.global_topk[i].score) << '\n';

    buf << "\n[assignments]\ncomponent\tsize\tuser\tglobal_rank\tscore\tsource\n";
    for (const auto &a : plan.assignments)
        for (const auto &i : a.influencers)
            buf << a.component << '\t' << a.group.size() << '\t' << i.user << '\t'
                << i.global_rank << '\t' << format_double(i.score) << '\t'
                << (i.below_global_top_k ? "below-global-top-k" : "global-top-k") << '\n';

    buf << "\n[skipped]\ncomponent\tsize\treason\n";
    for (const auto &s : plan.skipped)
        buf << s.component << '\t' << s.group.size() << '\t' << s.reason << '\n';

    buf << "\n[summary]\nbudget_infeasible\t" << (plan.budget_infeasible ? "true" : "false")
        << "\ncoverage\t" << format_double(plan.coverage) << "\nrecommended_months\t";
    for (std::size_t i = 0; i < plan.recommended_months.size(); ++i)
        buf << (i ? "," : "") << plan.recommended_months[i];
    buf << '\n';
    out << buf.str();
}

void write_profiles(std::ostream &out, const std::vector<MonthlyProfile> &profiles) {
    std::ostringstream buf;
    buf << "band\tmonth\tprobability\n";
    for (const auto &p : profiles)
        for (std::size_t m = 0; m < 12; ++m)
            buf << p.band << '\t' << m + 1 << '\t' << format_double(p.probabilities[m]) << '\n';
    out << buf.str();
}

void write_topics(std::ostream &out,
                  const std::vector<std::pair<std::string, std::size_t>> &topics) {
    std::ostringstream buf;
    buf << "term\tfrequency\n";
    for (const auto &[term, count] : topics)
        buf << term << '\t' << count << '\n';
    out << buf.str();
}

} // namespace womgraph
