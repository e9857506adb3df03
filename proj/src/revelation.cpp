#include "cellstress/revelation.hpp"

#include "cellstress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace cellstress::reveal {

std::string termination_name(Termination t) {
    return t == Termination::x_stressing_positive ? "x_stressing_positive" : "list_exhausted";
}

bool IsLabelMap::is_stressing(const std::string& client_id) const {
    auto it = stressing.find(client_id);
    return it != stressing.end() && it->second;
}

std::size_t IsLabelMap::stressing_count() const {
    std::size_t n = 0;
    for (const auto& [id, is] : stressing) {
        (void)id;
        n += is ? 1 : 0;
    }
    return n;
}

lp::LpProblem build_scaling_problem(const occupancy::FootprintTensor& fp,
                                    const std::vector<data::CellRecord>& cells, double x_max) {
    if (fp.groups != lp::kGroups) throw InvalidConfigError("scaling program expects 3 groups");
    if (static_cast<std::size_t>(fp.cells) != cells.size()) {
        throw InvalidConfigError("footprint does not match the cell catalog");
    }
    lp::LpProblem p;
    p.x_max = x_max;
    for (int i = 0; i < lp::kGroups; ++i) p.group_sizes[i] = static_cast<double>(fp.group_sizes[i]);
    for (int t = 0; t < fp.slots; ++t) {
        for (int j = 0; j < fp.cells; ++j) {
            lp::Constraint c;
            bool occupied = false;
            for (int g = 0; g < lp::kGroups; ++g) {
                c.usage[g] = fp.at(g, t, j);
                occupied = occupied || c.usage[g] > 0.0;
            }
            if (!occupied) continue;  // vacuous (slot, cell)
            c.capacity = cells[j].capacity;
            p.constraints.push_back(c);
        }
    }
    return p;
}

RevealResult reveal_is(const data::Dataset& d, const RevealConfig& cfg) {
    if (cfg.head_fraction <= 0.0 || cfg.head_fraction > 1.0 || cfg.bottom_fraction < 0.0 ||
        cfg.bottom_fraction > 1.0) {
        throw InvalidConfigError("head/bottom fractions out of range");
    }

    // Part I: rank everyone once, on the full dataset.
    const occupancy::OccupancyMatrix occ = occupancy::build_occupancy(d);
    std::vector<occupancy::HotspotScore> ranked =
        occupancy::rank_clients(occupancy::score_all_clients(d, occ, cfg.hotspot));
    // Clients below the activity floor carry score 0 and never enter the list.
    while (!ranked.empty() && ranked.back().score <= 0.0) ranked.pop_back();

    const std::size_t min_rankable =
        static_cast<std::size_t>(std::ceil(1.0 / cfg.head_fraction));
    if (ranked.size() < min_rankable) {
        throw InsufficientClientsError(
            "need at least " + std::to_string(min_rankable) + " rankable clients for head fraction " +
            std::to_string(cfg.head_fraction) + ", have " + std::to_string(ranked.size()));
    }

    std::vector<std::string> list;
    list.reserve(ranked.size());
    for (const occupancy::HotspotScore& s : ranked) list.push_back(s.client_id);

    const std::size_t initial_head =
        std::max<std::size_t>(1, static_cast<std::size_t>(cfg.head_fraction * list.size()));
    const std::size_t max_iterations =
        (d.clients().size() + initial_head - 1) / initial_head + 1;

    RevealResult result;
    std::set<std::string> confirmed;
    data::Dataset current = d;

    std::size_t iteration = 0;
    while (true) {
        if (list.empty()) {
            result.trace.termination = Termination::list_exhausted;
            break;
        }
        if (++iteration > max_iterations) {
            throw NonTerminationError("revelation exceeded " + std::to_string(max_iterations) +
                                      " iterations");
        }

        const std::size_t head_n = std::min(
            list.size(),
            std::max<std::size_t>(1, static_cast<std::size_t>(cfg.head_fraction * list.size())));
        std::size_t bottom_n =
            std::max<std::size_t>(1, static_cast<std::size_t>(cfg.bottom_fraction * list.size()));
        bottom_n = std::min(bottom_n, list.size() - head_n);

        // Everyone in the current dataset belongs to a group: the head is
        // tentatively stressing, the bottom anchors friendly, the rest
        // (including clients too sparse to rank) are medium.
        std::vector<int> groups(current.clients().size(),
                                static_cast<int>(lp::Group::medium));
        IterationRecord record;
        for (std::size_t k = 0; k < head_n; ++k) {
            record.head.push_back(list[k]);
            groups[*current.client_index(list[k])] = static_cast<int>(lp::Group::stressing);
        }
        for (std::size_t k = list.size() - bottom_n; k < list.size(); ++k) {
            groups[*current.client_index(list[k])] = static_cast<int>(lp::Group::friendly);
        }

        const occupancy::FootprintTensor fp =
            occupancy::build_footprint(current, groups, {"stressing", "medium", "friendly"});
        const lp::ScalingSolution sol =
            lp::solve(build_scaling_problem(fp, current.cells(), cfg.x_max));
        record.x = sol.x;

        if (sol.x[static_cast<int>(lp::Group::stressing)] <= cfg.zero_tolerance) {
            record.confirmed = true;
            std::set<std::string> head_set(record.head.begin(), record.head.end());
            confirmed.insert(head_set.begin(), head_set.end());
            record.confirmed_total = confirmed.size();
            result.trace.iterations.push_back(std::move(record));

            current = data::remove_clients(current, head_set);
            list.erase(list.begin(), list.begin() + head_n);
            continue;
        }

        record.confirmed_total = confirmed.size();
        result.trace.iterations.push_back(std::move(record));
        result.trace.termination = Termination::x_stressing_positive;
        break;
    }

    for (const data::ClientRecord& c : d.clients()) {
        result.labels.stressing[c.client_id] = confirmed.count(c.client_id) > 0;
    }
    return result;
}

namespace {

std::map<std::string, double> frequencies(const IsLabelMap& labels,
                                          const std::vector<data::ClientRecord>& clients,
                                          data::Segmentation system) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // segment -> (is, total)
    for (const data::ClientRecord& c : clients) {
        const std::string& seg =
            system == data::Segmentation::mosaic ? c.mosaic_segment : c.telenor_segment;
        auto it = labels.stressing.find(c.client_id);
        if (it == labels.stressing.end()) throw UnknownClientError(c.client_id + " (unlabeled)");
        auto& [is_count, total] = tally[seg];
        if (it->second) ++is_count;
        ++total;
    }
    std::map<std::string, double> out;
    for (const auto& [seg, counts] : tally) {
        out[seg] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    return out;
}

}  // namespace

std::map<std::string, double> is_frequency_by_segment(const IsLabelMap& labels,
                                                      const std::vector<data::ClientRecord>& clients,
                                                      data::Segmentation system) {
    return frequencies(labels, clients, system);
}

std::map<std::string, double> is_frequency_by_segment(const IsLabelMap& labels,
                                                      const std::vector<data::ClientRecord>& clients,
                                                      data::Segmentation system,
                                                      const std::set<std::string>& universe) {
    std::map<std::string, double> freq = frequencies(labels, clients, system);
    for (const std::string& seg : universe) {
        if (!freq.count(seg)) throw EmptySegmentError(seg);
    }
    return freq;
}

void write_labels_csv(const IsLabelMap& labels, const std::vector<data::ClientRecord>& clients,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "client_id,label\n";
    for (const data::ClientRecord& c : clients) {
        auto it = labels.stressing.find(c.client_id);
        const bool is = it != labels.stressing.end() && it->second;
        out << c.client_id << ',' << (is ? "IS" : "notIS") << '\n';
    }
}

}  // namespace cellstress::reveal
