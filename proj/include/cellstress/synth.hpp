#pragma once

#include "cellstress/data_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cellstress::synth {

struct SegmentMix {
    std::vector<std::string> labels;
    std::vector<double> weights;  // must sum to 1 within 1e-9
};

SegmentMix default_mosaic_mix();   // fourteen lifestyle classes, uniform
SegmentMix default_telenor_mix();  // six in-house classes, uniform

// A compact region whose ground truth is known: a handful of peak cells are
// kept saturated by permanently-resident clients, everyone else roams between
// the remaining cells with a home bias.
struct SynthConfig {
    std::uint64_t seed = 1;
    int n_cells = 50;
    int n_clients = 2000;
    int window_slots = data::kDefaultWindowSlots;

    double planted_stressing_fraction = 0.05;  // residents pinned to peak cells
    int peak_cell_count = 4;
    // Peak cells get capacity equal to their observed demand peak; the rest get
    // this multiple of theirs.
    double capacity_headroom = 5.0;

    // A short crowd surge at the peak cells (think stadium event): many one-off
    // visitors, each active for only a few slots, so they stay below any
    // reasonable activity floor while still pressing on peak capacity.
    int surge_clients = 120;
    int surge_slots = 10;

    double roam_activity = 0.45;  // chance a roaming client is active in a slot
    double home_bias = 0.8;       // chance an active roamer sits at its home cell

    SegmentMix mosaic = default_mosaic_mix();
    SegmentMix telenor = default_telenor_mix();
};

struct SynthResult {
    data::Dataset dataset;
    std::vector<std::string> planted_ids;  // ground-truth stressing clients
};

SynthResult generate(const SynthConfig& cfg);

// Generates and writes cells.csv / clients.csv / events.csv under out_dir.
SynthResult generate_files(const SynthConfig& cfg, const std::string& out_dir);

// Flat key/value JSON (seed, cells, clients, slots, planted_fraction, ...);
// unknown keys are rejected.
SynthConfig load_synth_config(const std::string& path);

}  // namespace cellstress::synth
