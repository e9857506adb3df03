#include "cellstress/occupancy.hpp"

#include "cellstress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

namespace cellstress::occupancy {

OccupancyMatrix build_occupancy(const data::Dataset& d) {
    OccupancyMatrix occ;
    occ.slots = d.window_slots();
    occ.cells = static_cast<int>(d.cells().size());
    occ.counts.assign(static_cast<std::size_t>(occ.slots) * occ.cells, 0);
    // Events are normalized to one per (client, slot), so counting rows counts clients.
    for (const data::CdrEvent& e : d.events()) {
        ++occ.at(static_cast<int>(e.slot), static_cast<int>(e.cell));
    }
    return occ;
}

std::optional<int> FootprintTensor::group_index(std::string_view name) const {
    for (int g = 0; g < groups; ++g) {
        if (group_names[g] == name) return g;
    }
    return std::nullopt;
}

FootprintTensor build_footprint(const data::Dataset& d, std::span<const int> client_groups,
                                std::vector<std::string> group_names) {
    if (client_groups.size() != d.clients().size()) {
        throw InvalidConfigError("client group assignment size mismatch");
    }
    FootprintTensor fp;
    fp.groups = static_cast<int>(group_names.size());
    fp.slots = d.window_slots();
    fp.cells = static_cast<int>(d.cells().size());
    fp.group_names = std::move(group_names);
    fp.group_sizes.assign(fp.groups, 0);
    fp.counts.assign(static_cast<std::size_t>(fp.groups) * fp.slots * fp.cells, 0);

    for (std::size_t i = 0; i < client_groups.size(); ++i) {
        int g = client_groups[i];
        if (g < 0) continue;
        if (g >= fp.groups) throw InvalidConfigError("group index out of range");
        ++fp.group_sizes[g];
    }
    for (const data::CdrEvent& e : d.events()) {
        int g = client_groups[e.client];
        if (g < 0) throw UngroupedClientError(d.clients()[e.client].client_id);
        ++fp.at(g, static_cast<int>(e.slot), static_cast<int>(e.cell));
    }
    return fp;
}

FootprintTensor build_footprint(const data::Dataset& d,
                                const std::map<std::string, std::string>& grouping) {
    std::vector<std::string> names;
    for (const auto& [client, group] : grouping) {
        (void)client;
        if (std::find(names.begin(), names.end(), group) == names.end()) names.push_back(group);
    }
    std::sort(names.begin(), names.end());

    std::vector<int> assignment(d.clients().size(), -1);
    for (const auto& [client, group] : grouping) {
        auto idx = d.client_index(client);
        if (!idx) throw UnknownClientError(client);
        assignment[*idx] =
            static_cast<int>(std::find(names.begin(), names.end(), group) - names.begin());
    }
    return build_footprint(d, assignment, std::move(names));
}

FootprintTensor build_segment_footprint(const data::Dataset& d, data::Segmentation system) {
    std::vector<std::string> names;
    for (const data::ClientRecord& c : d.clients()) {
        const std::string& seg =
            system == data::Segmentation::mosaic ? c.mosaic_segment : c.telenor_segment;
        if (std::find(names.begin(), names.end(), seg) == names.end()) names.push_back(seg);
    }
    std::sort(names.begin(), names.end());

    std::vector<int> assignment(d.clients().size(), -1);
    for (std::size_t i = 0; i < d.clients().size(); ++i) {
        const data::ClientRecord& c = d.clients()[i];
        const std::string& seg =
            system == data::Segmentation::mosaic ? c.mosaic_segment : c.telenor_segment;
        assignment[i] = static_cast<int>(std::find(names.begin(), names.end(), seg) - names.begin());
    }
    return build_footprint(d, assignment, std::move(names));
}

namespace {

HotspotScore score_client(const data::Dataset& d, const OccupancyMatrix& occ,
                          std::uint32_t client, const HotspotParams& params,
                          std::vector<double>& readings) {
    HotspotScore out;
    out.client_id = d.clients()[client].client_id;

    auto [first, last] = d.client_events(client);
    out.active_slots = static_cast<int>(last - first);
    if (out.active_slots < params.activity_floor || out.active_slots == 0) {
        return out;  // too sparse to rank
    }

    readings.clear();
    readings.reserve(out.active_slots);
    for (std::size_t k = first; k < last; ++k) {
        const data::CdrEvent& e = d.events()[k];
        double n = occ.at(static_cast<int>(e.slot), static_cast<int>(e.cell));
        if (params.normalize_by_capacity) n /= d.cells()[e.cell].capacity;
        readings.push_back(n);
    }
    std::sort(readings.begin(), readings.end(), std::greater<>());

    std::size_t top = static_cast<std::size_t>(
        std::max(1.0, std::floor(params.top_fraction * out.active_slots)));
    top = std::min(top, readings.size());
    for (std::size_t k = 0; k < top; ++k) out.score += readings[k];
    return out;
}

}  // namespace

HotspotScore hotspot_score(const data::Dataset& d, const OccupancyMatrix& occ,
                           std::string_view client_id, const HotspotParams& params) {
    auto idx = d.client_index(client_id);
    if (!idx) throw UnknownClientError(std::string(client_id));
    std::vector<double> scratch;
    return score_client(d, occ, *idx, params, scratch);
}

std::vector<HotspotScore> score_all_clients(const data::Dataset& d, const OccupancyMatrix& occ,
                                            const HotspotParams& params) {
    std::vector<HotspotScore> out;
    out.reserve(d.clients().size());
    std::vector<double> scratch;
    for (std::uint32_t i = 0; i < d.clients().size(); ++i) {
        out.push_back(score_client(d, occ, i, params, scratch));
    }
    return out;
}

std::vector<HotspotScore> rank_clients(std::vector<HotspotScore> scores) {
    std::sort(scores.begin(), scores.end(), [](const HotspotScore& a, const HotspotScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.client_id < b.client_id;
    });
    return scores;
}

void write_occupancy_csv(const OccupancyMatrix& occ, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "t,j,count\n";
    for (int t = 0; t < occ.slots; ++t) {
        for (int j = 0; j < occ.cells; ++j) {
            if (occ.at(t, j) != 0) out << t << ',' << j << ',' << occ.at(t, j) << '\n';
        }
    }
}

void write_footprint_csv(const FootprintTensor& fp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "group,t,j,count\n";
    for (int g = 0; g < fp.groups; ++g) {
        for (int t = 0; t < fp.slots; ++t) {
            for (int j = 0; j < fp.cells; ++j) {
                if (fp.at(g, t, j) != 0) {
                    out << fp.group_names[g] << ',' << t << ',' << j << ',' << fp.at(g, t, j) << '\n';
                }
            }
        }
    }
}

}  // namespace cellstress::occupancy
