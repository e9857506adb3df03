#pragma once

#include "cellstress/campaign.hpp"
#include "cellstress/data_model.hpp"
#include "cellstress/fuzzy.hpp"
#include "cellstress/revelation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cellstress::pipeline {

struct PipelineConfig {
    reveal::RevealConfig reveal{};
    double qualify_threshold = fuzzy::kDefaultQualifyThreshold;
    data::Segmentation system = data::Segmentation::mosaic;
    bool include_baseline = true;  // campaign capacity checks
    int window_slots = data::kDefaultWindowSlots;
};

// Flat key/value JSON; unknown keys are rejected so typos fail loudly.
PipelineConfig load_config(const std::string& path);
std::string resolved_config_json(const PipelineConfig& cfg);

struct DatasetPaths {
    std::string cells;
    std::string clients;
    std::string events;
};

// f_if memberships straight from a CSV fixture (`segment,f_if`), bypassing
// revelation; used to replay published tier tables.
std::vector<fuzzy::SegmentMembership> load_memberships_csv(const std::string& path,
                                                           double threshold);

std::vector<fuzzy::SegmentMembership> memberships_from_labels(
    const reveal::IsLabelMap& labels, const std::vector<data::ClientRecord>& clients,
    data::Segmentation system, double threshold);

// Tier-table style report: segment,f_if,f_sqrt,rather,f_sq,very,f_cube,extremely.
void write_ranking_csv(const std::vector<fuzzy::SegmentMembership>& memberships,
                       const std::string& path);
void write_ranking_json(const std::vector<fuzzy::SegmentMembership>& memberships,
                        const std::string& path);

struct LoadReport {
    std::vector<std::pair<std::string, double>> per_antenna;  // cell_id -> load
    double infrastructure = 0.0;
    std::optional<fuzzy::Hedge> context;
};

LoadReport assess_load(const data::Dataset& d,
                       double threshold = fuzzy::kDefaultQualifyThreshold);
void write_load_json(const LoadReport& report, const std::string& path);

void write_trace_json(const reveal::RevelationTrace& trace, const std::string& path);
void write_campaign_json(const campaign::CampaignReport& report,
                         const campaign::RecommendationVerdict& verdict, const std::string& path);

struct PipelineResult {
    reveal::RevealResult revelation;
    std::vector<fuzzy::SegmentMembership> memberships;
    LoadReport load;
    fuzzy::QueryAnswer answer;
};

// Full flow: reveal -> per-segment frequencies -> tier classification ->
// load assessment -> context query. Writes labels.csv, trace.json,
// ranking.csv, ranking.json, load.json and summary.json under out_dir.
PipelineResult run_pipeline(const DatasetPaths& paths, const PipelineConfig& cfg,
                            const std::string& out_dir);

}  // namespace cellstress::pipeline
