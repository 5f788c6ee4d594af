#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include "womgraph/graph.hpp"

namespace womgraph {

enum class BowTieClass { core, in, out, tendrils, tubes, disconnected };

inline constexpr std::array<BowTieClass, 6> kBowTieClasses{
    BowTieClass::core,     BowTieClass::in,    BowTieClass::out,
    BowTieClass::tendrils, BowTieClass::tubes, BowTieClass::disconnected};

std::string_view bowtie_class_name(BowTieClass c);

/// Six-way partition of the node set around the largest strongly connected component.
struct BowTieDecomposition {
    std::vector<BowTieClass> node_class; // indexed like graph nodes
    std::array<std::vector<UserId>, 6> members;

    const std::vector<UserId> &of(BowTieClass c) const {
        return members[static_cast<std::size_t>(c)];
    }
    double fraction(BowTieClass c) const;
};

// Tarjan's algorithm (iterative). Components are returned with sorted members.
std::vector<std::vector<NodeIndex>> strongly_connected_components(const InteractionGraph &graph);

/// core: largest SCC, ties broken by smallest member id. in: reaches core. out:
/// reached from core. tubes: reached from in and reaching out without touching core.
/// tendrils: everything else weakly connected to core. disconnected: the rest.
BowTieDecomposition bowtie_decompose(const InteractionGraph &graph);

struct SubGroup {
    std::vector<UserId> members; // sorted

    std::size_t size() const { return members.size(); }
    bool operator==(const SubGroup &) const = default;
};

// Sorted by size descending, then smallest member id.
std::vector<SubGroup> weakly_connected_components(const InteractionGraph &graph);

// "class\tcount\tfraction" lines; with per_user, followed by "user\tclass" lines.
void write_bowtie_report(std::ostream &out, const BowTieDecomposition &decomposition,
                         bool per_user);

// "component\tsize\tmembers" with comma-separated members.
void write_components(std::ostream &out, const std::vector<SubGroup> &components);

} // namespace womgraph
