#pragma once

#include "cellstress/data_model.hpp"
#include "cellstress/lp_solver.hpp"
#include "cellstress/occupancy.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cellstress::reveal {

struct RevealConfig {
    double head_fraction = 0.01;    // tentative stressing share of the remaining list
    double bottom_fraction = 0.01;  // friendly anchor share
    double x_max = 10.0;
    double zero_tolerance = 1e-9;  // x[stressing] at or below this confirms the head
    occupancy::HotspotParams hotspot{};
};

enum class Termination { x_stressing_positive, list_exhausted };
std::string termination_name(Termination t);

struct IterationRecord {
    std::vector<std::string> head;  // tentative stressing client ids
    std::array<double, lp::kGroups> x{};
    bool confirmed = false;
    std::size_t confirmed_total = 0;  // running count of revealed clients
};

struct RevelationTrace {
    std::vector<IterationRecord> iterations;
    Termination termination = Termination::list_exhausted;
};

// Total labeling: true = infrastructure-stressing, false = not.
struct IsLabelMap {
    std::map<std::string, bool> stressing;

    bool is_stressing(const std::string& client_id) const;
    std::size_t stressing_count() const;
};

struct RevealResult {
    IsLabelMap labels;
    RevelationTrace trace;
};

// Ranks clients by hotspot weight once, then repeatedly asks the scaling
// program whether the head of the remaining list could grow at all; heads that
// cannot (x[stressing] = 0) are confirmed stressing and removed.
RevealResult reveal_is(const data::Dataset& d, const RevealConfig& cfg = {});

// Builds the capacity rows for the current footprint: one row per (slot, cell)
// that anyone occupies.
lp::LpProblem build_scaling_problem(const occupancy::FootprintTensor& fp,
                                    const std::vector<data::CellRecord>& cells, double x_max);

// f_IS per segment: share of the segment's members labeled stressing.
std::map<std::string, double> is_frequency_by_segment(const IsLabelMap& labels,
                                                      const std::vector<data::ClientRecord>& clients,
                                                      data::Segmentation system);

// Same, but over an explicit segment universe; a universe segment with no
// members has no defined frequency (EmptySegmentError).
std::map<std::string, double> is_frequency_by_segment(const IsLabelMap& labels,
                                                      const std::vector<data::ClientRecord>& clients,
                                                      data::Segmentation system,
                                                      const std::set<std::string>& universe);

void write_labels_csv(const IsLabelMap& labels, const std::vector<data::ClientRecord>& clients,
                      const std::string& path);

}  // namespace cellstress::reveal
