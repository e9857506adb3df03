#include "cellstress/campaign.hpp"

#include "cellstress/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cellstress::campaign {

namespace {
// Keeps float noise in alpha * footprint from flagging an exactly-full cell.
constexpr double kLoadTol = 1e-9;
}  // namespace

double compute_alpha(long long expected_new, long long total_clients) {
    if (total_clients <= 0) throw ZeroPopulationError();
    if (expected_new < 0) throw InvalidConfigError("expected new clients must be non-negative");
    return static_cast<double>(expected_new) / static_cast<double>(total_clients);
}

CampaignReport simulate(const data::Dataset& d, const occupancy::OccupancyMatrix& occ,
                        const occupancy::FootprintTensor& segment_footprint,
                        const CampaignSpec& spec) {
    auto target = segment_footprint.group_index(spec.segment);
    if (!target) throw UnknownSegmentError(spec.segment);
    if (occ.slots != segment_footprint.slots || occ.cells != segment_footprint.cells) {
        throw InvalidConfigError("occupancy and footprint shapes differ");
    }

    CampaignReport report;
    report.alpha = compute_alpha(spec.expected_new_clients,
                                 static_cast<long long>(d.clients().size()));
    report.include_baseline = spec.include_baseline;

    std::vector<fuzzy::Membership> before;
    before.reserve(d.cells().size());
    for (std::size_t j = 0; j < d.cells().size(); ++j) {
        before.push_back(fuzzy::antenna_load(occ, static_cast<int>(j), d.cells()[j].capacity));
    }
    report.load_before = fuzzy::infrastructure_load(before);
    report.hedge_before = fuzzy::select_context(report.load_before, spec.threshold);

    // Scan cells in catalog-id order so the warning list is canonical.
    std::vector<std::size_t> cell_order(d.cells().size());
    for (std::size_t j = 0; j < cell_order.size(); ++j) cell_order[j] = j;
    std::sort(cell_order.begin(), cell_order.end(), [&](std::size_t a, std::size_t b) {
        return d.cells()[a].cell_id < d.cells()[b].cell_id;
    });

    double peak_ratio = 0.0;  // projected load over capacity, baseline always in
    for (std::size_t j : cell_order) {
        const double capacity = d.cells()[j].capacity;
        for (int t = 0; t < occ.slots; ++t) {
            const double extra = report.alpha * segment_footprint.at(*target, t, static_cast<int>(j));
            const double baseline = occ.at(t, static_cast<int>(j));
            peak_ratio = std::max(peak_ratio, (baseline + extra) / capacity);

            const double checked = (spec.include_baseline ? baseline : 0.0) + extra;
            if (checked > capacity + kLoadTol) {
                report.warnings.push_back(
                    {d.cells()[j].cell_id, t, checked, capacity});
            }
        }
    }
    report.load_after = fuzzy::Membership(std::min(1.0, peak_ratio));
    report.hedge_after = fuzzy::select_context(report.load_after, spec.threshold);
    return report;
}

RecommendationVerdict validate_recommendation(const std::vector<fuzzy::SegmentMembership>& memberships,
                                              fuzzy::Membership current_load,
                                              const CampaignReport& report,
                                              const std::string& segment, double threshold) {
    RecommendationVerdict verdict;
    verdict.context = fuzzy::select_context(current_load, threshold);
    verdict.violation_count = report.warnings.size();

    const fuzzy::SegmentMembership* m = nullptr;
    for (const fuzzy::SegmentMembership& cand : memberships) {
        if (cand.segment == segment) m = &cand;
    }
    if (m == nullptr) throw UnknownSegmentError(segment);

    if (!verdict.context.has_value()) {
        verdict.segment_qualifies = true;  // unloaded network: no restriction
    } else {
        verdict.segment_qualifies =
            fuzzy::apply_hedge(m->f_if, *verdict.context).value() >= threshold;
    }

    verdict.accepted = verdict.segment_qualifies && report.warnings.empty();
    if (verdict.accepted) {
        verdict.reason = "segment acceptable at current load, no projected overload";
    } else if (!verdict.segment_qualifies) {
        verdict.reason = "segment does not qualify at the current load context";
    } else {
        verdict.reason = "projected load exceeds capacity at " +
                         std::to_string(report.warnings.size()) + " cell-slot(s)";
    }
    return verdict;
}

}  // namespace cellstress::campaign
