#include "cellstress/synth.hpp"

#include "cellstress/errors.hpp"
#include "cellstress/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace cellstress::synth {

SegmentMix default_mosaic_mix() {
    SegmentMix mix;
    for (char c = 'A'; c <= 'N'; ++c) mix.labels.push_back(std::string(1, c));
    mix.weights.assign(mix.labels.size(), 1.0 / static_cast<double>(mix.labels.size()));
    return mix;
}

SegmentMix default_telenor_mix() {
    SegmentMix mix;
    mix.labels = {"CA", "CC", "MM", "QA", "T", "VA"};
    mix.weights.assign(mix.labels.size(), 1.0 / static_cast<double>(mix.labels.size()));
    return mix;
}

namespace {

void validate_mix(const SegmentMix& mix, const char* name) {
    if (mix.labels.empty() || mix.labels.size() != mix.weights.size()) {
        throw InvalidConfigError(std::string(name) + " segment mix is malformed");
    }
    double sum = std::accumulate(mix.weights.begin(), mix.weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidConfigError(std::string(name) + " segment weights must sum to 1");
    }
    for (double w : mix.weights) {
        if (w < 0.0) throw InvalidConfigError(std::string(name) + " segment weights must be >= 0");
    }
}

void validate(const SynthConfig& cfg) {
    if (cfg.n_cells < 1 || cfg.n_clients < 1 || cfg.window_slots < 1) {
        throw InvalidConfigError("cells, clients and window length must be positive");
    }
    if (cfg.planted_stressing_fraction < 0.0 || cfg.planted_stressing_fraction > 1.0) {
        throw InvalidConfigError("planted fraction must lie in [0,1]");
    }
    if (cfg.peak_cell_count < 0 || cfg.peak_cell_count >= cfg.n_cells) {
        throw InvalidConfigError("peak cell count must leave room for regular cells");
    }
    if (cfg.capacity_headroom < 1.0) throw InvalidConfigError("capacity headroom must be >= 1");
    if (cfg.surge_clients < 0 || cfg.surge_slots < 0 || cfg.surge_slots > cfg.window_slots) {
        throw InvalidConfigError("surge parameters out of range");
    }
    if (cfg.roam_activity < 0.0 || cfg.roam_activity > 1.0 || cfg.home_bias < 0.0 ||
        cfg.home_bias > 1.0) {
        throw InvalidConfigError("activity/bias probabilities out of range");
    }
    validate_mix(cfg.mosaic, "mosaic");
    validate_mix(cfg.telenor, "telenor");
}

constexpr std::uint64_t kSegmentStream = 0x5e67u;   // segment labels
constexpr std::uint64_t kMobilityStream = 0x307eu;  // trajectories

std::string padded_id(const char* prefix, int i, int width) {
    std::string digits = std::to_string(i);
    return std::string(prefix) + std::string(width - std::min<int>(width, digits.size()), '0') + digits;
}

const std::string& pick_segment(const SegmentMix& mix, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < mix.labels.size(); ++k) {
        acc += mix.weights[k];
        if (u < acc) return mix.labels[k];
    }
    return mix.labels.back();
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
    validate(cfg);

    const int id_width = static_cast<int>(std::to_string(cfg.n_clients).size());
    // Residency must be identical across peak cells: unequal counts would give
    // one cell's dwellers strictly higher hotspot readings, the ranking head
    // would cluster there, and the remaining saturated cells would pin the
    // scaling program in a way that frees the head. Round both populations
    // down to a peak-cell multiple.
    int planted_n = static_cast<int>(cfg.planted_stressing_fraction * cfg.n_clients);
    const int peak_cells = std::min(cfg.peak_cell_count, planted_n);
    int surge_n = 0;
    if (peak_cells > 0) {
        planted_n -= planted_n % peak_cells;
        surge_n = std::min(cfg.surge_clients, cfg.n_clients - planted_n);
        surge_n -= surge_n % peak_cells;
    } else {
        planted_n = 0;
    }
    const int surge_start = std::max(0, cfg.window_slots / 2 - cfg.surge_slots / 2);
    const int surge_end = std::min(cfg.window_slots, surge_start + cfg.surge_slots);

    std::vector<data::ClientRecord> clients;
    clients.reserve(cfg.n_clients);
    for (int i = 0; i < cfg.n_clients; ++i) {
        rng::SplitMix64 g(rng::mix(cfg.seed, kSegmentStream * 0x100000000ULL + i));
        data::ClientRecord c;
        c.client_id = padded_id("c", i, id_width);
        c.mosaic_segment = pick_segment(cfg.mosaic, g.next_unit());
        c.telenor_segment = pick_segment(cfg.telenor, g.next_unit());
        clients.push_back(std::move(c));
    }

    SynthResult result;
    std::vector<data::CdrEvent> events;
    const int roam_cells = cfg.n_cells - peak_cells;  // cells peak_cells..n_cells-1

    for (int i = 0; i < cfg.n_clients; ++i) {
        rng::SplitMix64 g(rng::mix(cfg.seed, kMobilityStream * 0x100000000ULL + i));
        const std::uint32_t client = static_cast<std::uint32_t>(i);

        if (i < planted_n) {
            // Resident: parked on one peak cell the whole window.
            const std::uint32_t cell = static_cast<std::uint32_t>(i % peak_cells);
            result.planted_ids.push_back(clients[i].client_id);
            for (int t = 0; t < cfg.window_slots; ++t) {
                events.push_back({client, static_cast<std::uint32_t>(t), cell});
            }
            continue;
        }
        if (i < planted_n + surge_n) {
            // Surge visitor: a few slots at one peak cell, silent otherwise.
            const std::uint32_t cell = static_cast<std::uint32_t>((i - planted_n) % peak_cells);
            for (int t = surge_start; t < surge_end; ++t) {
                events.push_back({client, static_cast<std::uint32_t>(t), cell});
            }
            continue;
        }

        // Roamer: home-biased movement over the non-peak cells.
        const std::uint32_t home =
            static_cast<std::uint32_t>(peak_cells + static_cast<int>(g.below(roam_cells)));
        for (int t = 0; t < cfg.window_slots; ++t) {
            if (!g.chance(cfg.roam_activity)) continue;
            std::uint32_t cell = home;
            if (!g.chance(cfg.home_bias)) {
                cell = static_cast<std::uint32_t>(peak_cells + static_cast<int>(g.below(roam_cells)));
            }
            events.push_back({client, static_cast<std::uint32_t>(t), cell});
        }
    }

    // Capacities follow realized demand: peak cells sit exactly at their peak,
    // the rest keep generous headroom.
    std::vector<std::int32_t> peak(cfg.n_cells, 0);
    {
        std::vector<std::int32_t> counts(static_cast<std::size_t>(cfg.window_slots) * cfg.n_cells, 0);
        for (const data::CdrEvent& e : events) {
            std::int32_t& n = counts[static_cast<std::size_t>(e.slot) * cfg.n_cells + e.cell];
            ++n;
            peak[e.cell] = std::max(peak[e.cell], n);
        }
    }

    std::vector<data::CellRecord> cells;
    cells.reserve(cfg.n_cells);
    for (int j = 0; j < cfg.n_cells; ++j) {
        data::CellRecord c;
        c.cell_id = padded_id("cell", j, static_cast<int>(std::to_string(cfg.n_cells).size()));
        c.lon = 15.0 + 0.01 * (j % 10);
        c.lat = 56.0 + 0.01 * (j / 10);
        if (j < peak_cells) {
            c.capacity = std::max<std::int32_t>(1, peak[j]);
        } else {
            c.capacity = std::max<std::int32_t>(
                1, static_cast<std::int32_t>(std::ceil(peak[j] * cfg.capacity_headroom)));
        }
        cells.push_back(std::move(c));
    }

    result.dataset = data::Dataset(std::move(cells), std::move(clients), std::move(events),
                                   cfg.window_slots);
    return result;
}

SynthResult generate_files(const SynthConfig& cfg, const std::string& out_dir) {
    SynthResult result = generate(cfg);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base(out_dir);
    data::write_dataset(result.dataset, (base / "cells.csv").string(),
                        (base / "clients.csv").string(), (base / "events.csv").string());
    return result;
}

SynthConfig load_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfigError("bad config JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InvalidConfigError("config must be a JSON object");

    SynthConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "cells") cfg.n_cells = value.get<int>();
            else if (key == "clients") cfg.n_clients = value.get<int>();
            else if (key == "slots") cfg.window_slots = value.get<int>();
            else if (key == "planted_fraction")
                cfg.planted_stressing_fraction = value.get<double>();
            else if (key == "peak_cells") cfg.peak_cell_count = value.get<int>();
            else if (key == "headroom") cfg.capacity_headroom = value.get<double>();
            else if (key == "surge_clients") cfg.surge_clients = value.get<int>();
            else if (key == "surge_slots") cfg.surge_slots = value.get<int>();
            else if (key == "roam_activity") cfg.roam_activity = value.get<double>();
            else if (key == "home_bias") cfg.home_bias = value.get<double>();
            else throw InvalidConfigError("unknown config key: " + key);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidConfigError("bad value for config key '" + key + "': " + e.what());
        }
    }
    return cfg;
}

}  // namespace cellstress::synth
