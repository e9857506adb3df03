#pragma once

#include "cellstress/data_model.hpp"
#include "cellstress/occupancy.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cellstress::fuzzy {

inline constexpr double kDefaultQualifyThreshold = 0.9;

// A grade of membership, always inside [0, 1].
class Membership {
public:
    Membership() = default;
    explicit Membership(double value);
    double value() const { return value_; }

    bool operator==(const Membership&) const = default;

private:
    double value_ = 0.0;
};

Membership negate(Membership f);  // 1 - f

// Linguistic hedges realized as exponents on the membership function.
enum class Hedge { rather, very, extremely };
inline constexpr std::array<Hedge, 3> kHedges{Hedge::rather, Hedge::very, Hedge::extremely};

double hedge_exponent(Hedge h);  // 1/2, 2, 3
std::string_view hedge_name(Hedge h);
Hedge parse_hedge(std::string_view name);

Membership apply_hedge(Membership f, Hedge h);

struct HedgeVerdicts {
    bool rather = false;
    bool very = false;
    bool extremely = false;

    bool at(Hedge h) const;
    bool operator==(const HedgeVerdicts&) const = default;
};

// verdict(h) = apply_hedge(f_if, h) >= threshold (inclusive).
HedgeVerdicts classify(Membership f_if, double threshold = kDefaultQualifyThreshold);

// The six-value tier scale; values are reported by nearest anchor.
enum class TierLabel {
    fully_out,         // 0.0
    mostly_out,        // 0.1
    more_or_less_out,  // 0.4
    more_or_less_in,   // 0.6
    mostly_in,         // 0.9
    fully_in,          // 1.0
};

double tier_anchor(TierLabel t);
std::string_view tier_name(TierLabel t);
TierLabel nearest_tier(Membership f);  // equidistant values round to the higher anchor

struct SegmentMembership {
    std::string segment;
    Membership f_is;
    Membership f_if;                 // 1 - f_is
    std::array<double, 3> hedged{};  // rather, very, extremely
    HedgeVerdicts verdicts;
};

SegmentMembership assess_segment(std::string segment, Membership f_is,
                                 double threshold = kDefaultQualifyThreshold);

struct RankedSegment {
    SegmentMembership membership;
    double key = 0.0;  // hedged f_if used for ordering
    bool qualifies = false;
};

// Sorted by hedged f_if descending, ties by segment id; ordering is the same
// for every hedge because hedges are monotone.
std::vector<RankedSegment> rank_segments(std::vector<SegmentMembership> memberships, Hedge h,
                                         double threshold = kDefaultQualifyThreshold);

// Peak utilisation of one cell over the window, clamped into [0, 1].
Membership antenna_load(const occupancy::OccupancyMatrix& occ, int cell_index, double capacity);

// The zone is as loaded as its busiest antenna.
Membership infrastructure_load(const std::vector<Membership>& per_antenna);

// Strongest hedge under which the load still qualifies as "loaded"; the
// campaign context then demands the same hedge of IF segments. nullopt when
// even sqrt(load) stays below the threshold (unloaded network).
std::optional<Hedge> select_context(Membership load, double threshold = kDefaultQualifyThreshold);

struct QueryAnswer {
    std::optional<Hedge> context;
    bool unrestricted = false;  // context absent: any segment is acceptable
    std::vector<RankedSegment> ranking;
    std::vector<std::string> qualifying;  // segments meeting the context hedge
};

QueryAnswer query(const std::vector<SegmentMembership>& memberships, Membership load,
                  double threshold = kDefaultQualifyThreshold);

}  // namespace cellstress::fuzzy
