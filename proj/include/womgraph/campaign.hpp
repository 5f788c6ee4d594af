#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "womgraph/authority.hpp"
#include "womgraph/graph.hpp"
#include "womgraph/ingest.hpp"
#include "womgraph/structure.hpp"
#include "womgraph/text.hpp"

namespace womgraph {

struct ReinforcementParams {
    std::size_t k = 20;  // global influencer budget
    std::size_t r = 3;   // influencers per targeted sub-group
    std::size_t th = 50; // minimum sub-group size

    void validate() const;
};

RankedList select_influencers(const InteractionGraph &graph, Method method, std::size_t k,
                              const GroupActivityLog *log = nullptr,
                              const AuthorityOptions &options = {});

struct Assignee {
    UserId user;
    double score = 0.0;
    std::size_t global_rank = 0; // 1-based rank among all users
    bool below_global_top_k = false;

    bool operator==(const Assignee &) const = default;
};

struct SubGroupAssignment {
    std::size_t component = 0; // 1-based position in weakly_connected_components order
    SubGroup group;
    std::vector<Assignee> influencers;

    bool operator==(const SubGroupAssignment &) const = default;
};

struct SkippedGroup {
    std::size_t component = 0;
    SubGroup group;
    std::string reason;

    bool operator==(const SkippedGroup &) const = default;
};

inline constexpr std::string_view kBelowThreshold = "below threshold";
inline constexpr std::string_view kBudgetExhausted = "budget exhausted";

struct CampaignPlan {
    RankedList global_topk;
    std::vector<SubGroupAssignment> assignments;
    std::vector<SkippedGroup> skipped;
    // Set when the targeted sub-groups need more than k influencers in total; the
    // plan then covers the largest sub-groups that fit.
    bool budget_infeasible = false;
    double coverage = 0.0;
    std::vector<int> recommended_months;

    std::vector<UserId> selected_users() const;
};

/// Targets every weakly connected component with at least th members, largest first,
/// and gives each its r best members by global score. Members outside the global
/// top-k are used only when the component has fewer than r inside it, and are
/// flagged. Coverage of the assigned set is filled in; months are left empty.
CampaignPlan reinforced_selection(const InteractionGraph &graph, const ScoreVector &scores,
                                  const ReinforcementParams &params);

// Fraction of nodes that are selected or have an edge into a selected node.
double coverage_estimate(const InteractionGraph &graph, const std::vector<UserId> &selected);

// Inclusive 1-based rank range.
struct RankBand {
    std::size_t first = 1;
    std::size_t last = 1;

    std::string label() const;
};

std::vector<RankBand> parse_bands(std::string_view spec); // "1-200,201-500"

enum class ProfileEvent { posts, reactions_received };

ProfileEvent parse_profile_event(std::string_view name);

struct MonthlyProfile {
    std::string band;
    std::array<double, 12> probabilities{}; // index 0 is January
    std::size_t events = 0;

    bool empty() const { return events == 0; }
};

// Calendar month (1-12) of a UTC timestamp.
int month_of(Timestamp ts);

std::vector<MonthlyProfile> monthly_activity_profile(const GroupActivityLog &log,
                                                     const RankedList &ranking,
                                                     const std::vector<RankBand> &bands,
                                                     ProfileEvent event);

// Months ordered by band-averaged probability, ties in calendar order.
std::vector<int> best_promotion_window(const std::vector<MonthlyProfile> &profiles,
                                       std::size_t top_m);

// Most frequent unigrams and adjacent-token bigrams across post texts.
std::vector<std::pair<std::string, std::size_t>>
extract_popular_topics(const GroupActivityLog &log, const Preprocessor &preprocessor,
                       std::size_t top_n);

void write_campaign_report(std::ostream &out, const CampaignPlan &plan);
void write_profiles(std::ostream &out, const std::vector<MonthlyProfile> &profiles);
void write_topics(std::ostream &out,
                  const std::vector<std::pair<std::string, std::size_t>> &topics);

} // namespace womgraph
