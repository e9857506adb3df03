#pragma once

#include "cellstress/data_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cellstress::occupancy {

// N[t][j]: distinct clients served by cell j during slot t.
struct OccupancyMatrix {
    int slots = 0;
    int cells = 0;
    std::vector<std::int32_t> counts;  // row-major, t * cells + j

    std::int32_t at(int t, int j) const { return counts[static_cast<std::size_t>(t) * cells + j]; }
    std::int32_t& at(int t, int j) { return counts[static_cast<std::size_t>(t) * cells + j]; }
};

OccupancyMatrix build_occupancy(const data::Dataset& d);

// S[i][t][j]: group-i clients at cell j during slot t, plus group headcounts.
struct FootprintTensor {
    int groups = 0;
    int slots = 0;
    int cells = 0;
    std::vector<std::string> group_names;
    std::vector<std::int64_t> group_sizes;  // clients mapped to each group
    std::vector<std::int32_t> counts;       // (g * slots + t) * cells + j

    std::int32_t at(int g, int t, int j) const {
        return counts[(static_cast<std::size_t>(g) * slots + t) * cells + j];
    }
    std::int32_t& at(int g, int t, int j) {
        return counts[(static_cast<std::size_t>(g) * slots + t) * cells + j];
    }
    std::optional<int> group_index(std::string_view name) const;
};

// `client_groups` maps dense client index -> group index, or -1 for ungrouped.
// Every client that has events must be grouped (UngroupedClientError otherwise).
FootprintTensor build_footprint(const data::Dataset& d, std::span<const int> client_groups,
                                std::vector<std::string> group_names);

// Name-based variant matching the dataset ingestion surface; group indices are
// assigned in sorted group-name order.
FootprintTensor build_footprint(const data::Dataset& d,
                                const std::map<std::string, std::string>& grouping);

// Groups by the clients' geodemographic segment labels.
FootprintTensor build_segment_footprint(const data::Dataset& d, data::Segmentation system);

struct HotspotScore {
    std::string client_id;
    double score = 0.0;
    int active_slots = 0;
};

struct HotspotParams {
    double top_fraction = 0.05;          // share of a trajectory that counts as hot
    int activity_floor = 20;             // fewer active slots than this scores 0
    bool normalize_by_capacity = false;  // read N/C instead of raw N
};

// Sum of the top-fraction occupancy readings along the client's trajectory.
// The reading count is max(1, floor(top_fraction * active_slots)), which gives
// the canonical 100 readings for a fully active week at 5-minute resolution.
HotspotScore hotspot_score(const data::Dataset& d, const OccupancyMatrix& occ,
                           std::string_view client_id, const HotspotParams& params = {});

std::vector<HotspotScore> score_all_clients(const data::Dataset& d, const OccupancyMatrix& occ,
                                            const HotspotParams& params = {});

// Decreasing score; equal scores fall back to client_id order so runs are reproducible.
std::vector<HotspotScore> rank_clients(std::vector<HotspotScore> scores);

void write_occupancy_csv(const OccupancyMatrix& occ, const std::string& path);
void write_footprint_csv(const FootprintTensor& fp, const std::string& path);

}  // namespace cellstress::occupancy
