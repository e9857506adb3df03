#pragma once

#include "cellstress/data_model.hpp"
#include "cellstress/fuzzy.hpp"
#include "cellstress/occupancy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cellstress::campaign {

struct CampaignSpec {
    std::string segment;                 // target geodemographic segment
    long long expected_new_clients = 0;  // expected campaign yield
    data::Segmentation system = data::Segmentation::mosaic;
    // When set, the capacity check projects new load on top of the traffic that
    // is already there; cleared, it tests the scaled footprint alone.
    bool include_baseline = true;
    double threshold = fuzzy::kDefaultQualifyThreshold;  // for the load hedges
};

struct ViolationWarning {
    std::string cell_id;
    int slot = 0;
    double projected_load = 0.0;  // persons
    double capacity = 0.0;

    bool operator==(const ViolationWarning&) const = default;
};

struct CampaignReport {
    double alpha = 0.0;
    bool include_baseline = true;
    std::vector<ViolationWarning> warnings;  // ordered by (cell_id, slot)
    fuzzy::Membership load_before;
    fuzzy::Membership load_after;
    std::optional<fuzzy::Hedge> hedge_before;
    std::optional<fuzzy::Hedge> hedge_after;
};

// alpha = expected new clients / current total clients.
double compute_alpha(long long expected_new, long long total_clients);

// Scales the target segment's footprint by alpha (new clients are assumed to
// move like the segment's existing members), flags every (cell, slot) whose
// projected load tops the capacity, and re-derives the load hedge. The hedge
// recalculation always sees baseline plus projection: the network the campaign
// lands on still carries its current traffic.
CampaignReport simulate(const data::Dataset& d, const occupancy::OccupancyMatrix& occ,
                        const occupancy::FootprintTensor& segment_footprint,
                        const CampaignSpec& spec);

struct RecommendationVerdict {
    bool accepted = false;
    bool segment_qualifies = false;
    std::optional<fuzzy::Hedge> context;
    std::size_t violation_count = 0;
    std::string reason;
};

// Accept only when the target qualifies at the current load context AND the
// simulation is violation-free; anything else is rejected with the warnings.
RecommendationVerdict validate_recommendation(const std::vector<fuzzy::SegmentMembership>& memberships,
                                              fuzzy::Membership current_load,
                                              const CampaignReport& report,
                                              const std::string& segment,
                                              double threshold = fuzzy::kDefaultQualifyThreshold);

}  // namespace cellstress::campaign
