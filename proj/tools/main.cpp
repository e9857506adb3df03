#include "cellstress/campaign.hpp"
#include "cellstress/csv.hpp"
#include "cellstress/data_model.hpp"
#include "cellstress/errors.hpp"
#include "cellstress/occupancy.hpp"
#include "cellstress/pipeline.hpp"
#include "cellstress/revelation.hpp"
#include "cellstress/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;   // bad input data or unsatisfiable request
constexpr int kExitUsage = 64;

using nlohmann::json;
namespace cs = cellstress;

struct CommonOpts {
    std::string cells, clients, events;
    std::string out_dir = ".";
    std::string config_path;
    bool json_output = false;
};

cs::pipeline::PipelineConfig resolve_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) return {};
    return cs::pipeline::load_config(opts.config_path);
}

cs::pipeline::DatasetPaths dataset_paths(const CommonOpts& opts) {
    return {opts.cells, opts.clients, opts.events};
}

void emit(const CommonOpts& opts, const json& summary, const std::string& plain) {
    if (opts.json_output) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << plain;
    }
}

std::string hedge_or(const std::optional<cs::fuzzy::Hedge>& h, const char* fallback) {
    return h ? std::string(cs::fuzzy::hedge_name(*h)) : std::string(fallback);
}

int run_synth(const CommonOpts& opts, const cs::synth::SynthConfig& cfg) {
    cs::synth::SynthResult result = cs::synth::generate_files(cfg, opts.out_dir);
    json summary{{"out_dir", opts.out_dir},
                 {"seed", cfg.seed},
                 {"cells", result.dataset.cells().size()},
                 {"clients", result.dataset.clients().size()},
                 {"events", result.dataset.events().size()},
                 {"planted_stressing", result.planted_ids.size()}};
    emit(opts, summary,
         "wrote cells.csv, clients.csv, events.csv to " + opts.out_dir + " (" +
             std::to_string(result.dataset.events().size()) + " events, " +
             std::to_string(result.planted_ids.size()) + " planted stressing clients)\n");
    return kExitOk;
}

int run_reveal(const CommonOpts& opts, bool dump_occupancy) {
    const cs::pipeline::PipelineConfig cfg = resolve_config(opts);
    const cs::data::Dataset dataset =
        cs::data::parse_dataset(opts.cells, opts.clients, opts.events, cfg.window_slots);
    const cs::reveal::RevealResult result = cs::reveal::reveal_is(dataset, cfg.reveal);

    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path base(opts.out_dir);
    cs::reveal::write_labels_csv(result.labels, dataset.clients(),
                                 (base / "labels.csv").string());
    cs::pipeline::write_trace_json(result.trace, (base / "trace.json").string());
    if (dump_occupancy) {
        const cs::occupancy::OccupancyMatrix occ = cs::occupancy::build_occupancy(dataset);
        cs::occupancy::write_occupancy_csv(occ, (base / "occupancy.csv").string());
        cs::occupancy::write_footprint_csv(
            cs::occupancy::build_segment_footprint(dataset, cfg.system),
            (base / "footprint.csv").string());
    }

    json summary{{"clients", dataset.clients().size()},
                 {"stressing", result.labels.stressing_count()},
                 {"iterations", result.trace.iterations.size()},
                 {"termination", cs::reveal::termination_name(result.trace.termination)}};
    emit(opts, summary,
         "revealed " + std::to_string(result.labels.stressing_count()) + " stressing clients in " +
             std::to_string(result.trace.iterations.size()) + " iterations (" +
             cs::reveal::termination_name(result.trace.termination) + ")\n");
    return kExitOk;
}

std::vector<cs::fuzzy::SegmentMembership> memberships_from_label_files(
    const std::string& labels_path, const std::string& clients_path, cs::data::Segmentation system,
    double threshold) {
    cs::csv::Reader clients_reader(clients_path,
                                   {"client_id", "mosaic_segment", "telenor_segment"});
    std::vector<cs::data::ClientRecord> clients;
    std::vector<std::string> f;
    while (clients_reader.next(f)) clients.push_back({f[0], f[1], f[2]});

    cs::csv::Reader labels_reader(labels_path, {"client_id", "label"});
    cs::reveal::IsLabelMap labels;
    while (labels_reader.next(f)) {
        if (f[1] != "IS" && f[1] != "notIS") {
            throw cs::MalformedRowError(labels_reader.line(), "label must be IS or notIS");
        }
        labels.stressing[f[0]] = f[1] == "IS";
    }
    return cs::pipeline::memberships_from_labels(labels, clients, system, threshold);
}

int run_rank(const CommonOpts& opts, const std::string& memberships_path,
             const std::string& labels_path, const std::string& system_name, double threshold) {
    const cs::data::Segmentation system = cs::data::parse_segmentation(system_name);
    std::vector<cs::fuzzy::SegmentMembership> memberships;
    if (!memberships_path.empty()) {
        memberships = cs::pipeline::load_memberships_csv(memberships_path, threshold);
    } else if (!labels_path.empty() && !opts.clients.empty()) {
        memberships = memberships_from_label_files(labels_path, opts.clients, system, threshold);
    } else {
        throw cs::InvalidConfigError("rank needs --memberships, or --labels plus --clients");
    }

    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path base(opts.out_dir);
    cs::pipeline::write_ranking_csv(memberships, (base / "ranking.csv").string());
    cs::pipeline::write_ranking_json(memberships, (base / "ranking.json").string());

    json rows = json::array();
    std::size_t rather = 0, very = 0, extremely = 0;
    for (const cs::fuzzy::SegmentMembership& m : memberships) {
        rather += m.verdicts.rather;
        very += m.verdicts.very;
        extremely += m.verdicts.extremely;
        rows.push_back({{"segment", m.segment},
                        {"f_if", m.f_if.value()},
                        {"rather", m.verdicts.rather},
                        {"very", m.verdicts.very},
                        {"extremely", m.verdicts.extremely}});
    }
    json summary{{"segments", rows},
                 {"rather_count", rather},
                 {"very_count", very},
                 {"extremely_count", extremely}};
    emit(opts, summary,
         std::to_string(memberships.size()) + " segments ranked: " + std::to_string(rather) +
             " rather, " + std::to_string(very) + " very, " + std::to_string(extremely) +
             " extremely infrastructure-friendly\n");
    return kExitOk;
}

int run_assess_load(const CommonOpts& opts) {
    const cs::pipeline::PipelineConfig cfg = resolve_config(opts);
    const cs::data::Dataset dataset =
        cs::data::parse_dataset(opts.cells, opts.clients, opts.events, cfg.window_slots);
    const cs::pipeline::LoadReport report =
        cs::pipeline::assess_load(dataset, cfg.qualify_threshold);
    std::filesystem::create_directories(opts.out_dir);
    cs::pipeline::write_load_json(report,
                                  (std::filesystem::path(opts.out_dir) / "load.json").string());
    json summary{{"infrastructure_load", report.infrastructure},
                 {"context_hedge", hedge_or(report.context, "none")}};
    emit(opts, summary,
         "infrastructure load " + cs::csv::format_number(report.infrastructure) + ", context " +
             hedge_or(report.context, "none (unloaded)") + "\n");
    return kExitOk;
}

int run_simulate(const CommonOpts& opts, const std::string& segment, long long expected,
                 bool no_baseline, const std::string& system_name,
                 const std::string& memberships_path, std::size_t max_warnings) {
    const cs::pipeline::PipelineConfig cfg = resolve_config(opts);
    const cs::data::Segmentation system = cs::data::parse_segmentation(system_name);
    const cs::data::Dataset dataset =
        cs::data::parse_dataset(opts.cells, opts.clients, opts.events, cfg.window_slots);

    const cs::occupancy::OccupancyMatrix occ = cs::occupancy::build_occupancy(dataset);
    const cs::occupancy::FootprintTensor fp =
        cs::occupancy::build_segment_footprint(dataset, system);

    cs::campaign::CampaignSpec spec;
    spec.segment = segment;
    spec.expected_new_clients = expected;
    spec.system = system;
    spec.include_baseline = !no_baseline && cfg.include_baseline;
    spec.threshold = cfg.qualify_threshold;
    const cs::campaign::CampaignReport report = cs::campaign::simulate(dataset, occ, fp, spec);

    // Tier memberships come from a fixture when given, otherwise from a fresh
    // revelation pass over the same dataset.
    std::vector<cs::fuzzy::SegmentMembership> memberships;
    if (!memberships_path.empty()) {
        memberships = cs::pipeline::load_memberships_csv(memberships_path, cfg.qualify_threshold);
    } else {
        const cs::reveal::RevealResult revealed = cs::reveal::reveal_is(dataset, cfg.reveal);
        memberships = cs::pipeline::memberships_from_labels(revealed.labels, dataset.clients(),
                                                            system, cfg.qualify_threshold);
    }
    const cs::campaign::RecommendationVerdict verdict = cs::campaign::validate_recommendation(
        memberships, report.load_before, report, segment, cfg.qualify_threshold);

    std::filesystem::create_directories(opts.out_dir);
    cs::pipeline::write_campaign_json(
        report, verdict,
        (std::filesystem::path(opts.out_dir) / "campaign_report.json").string());

    json summary{{"alpha", report.alpha},
                 {"verdict", verdict.accepted ? "accept" : "reject"},
                 {"reason", verdict.reason},
                 {"warnings", report.warnings.size()},
                 {"load_before", report.load_before.value()},
                 {"load_after", report.load_after.value()},
                 {"hedge_before", hedge_or(report.hedge_before, "none")},
                 {"hedge_after", hedge_or(report.hedge_after, "none")}};

    std::string plain = std::string(verdict.accepted ? "ACCEPT" : "REJECT") + ": " +
                        verdict.reason + " (alpha " + cs::csv::format_number(report.alpha) + ", " +
                        std::to_string(report.warnings.size()) + " warnings)\n";
    // Console output shows only the head of the list; the JSON report has it all.
    for (std::size_t i = 0; i < report.warnings.size() && i < max_warnings; ++i) {
        const cs::campaign::ViolationWarning& w = report.warnings[i];
        plain += "  " + w.cell_id + " slot " + std::to_string(w.slot) + ": projected " +
                 cs::csv::format_number(w.projected_load) + " > capacity " +
                 cs::csv::format_number(w.capacity) + "\n";
    }
    if (report.warnings.size() > max_warnings) {
        plain += "  ... " + std::to_string(report.warnings.size() - max_warnings) + " more\n";
    }
    emit(opts, summary, plain);
    return kExitOk;
}

int run_report(const CommonOpts& opts, const std::string& system_override) {
    cs::pipeline::PipelineConfig cfg = resolve_config(opts);
    if (!system_override.empty()) cfg.system = cs::data::parse_segmentation(system_override);
    const cs::pipeline::PipelineResult result =
        cs::pipeline::run_pipeline(dataset_paths(opts), cfg, opts.out_dir);

    json summary{{"stressing", result.revelation.labels.stressing_count()},
                 {"segments", result.memberships.size()},
                 {"infrastructure_load", result.load.infrastructure},
                 {"context_hedge", hedge_or(result.answer.context, "none")},
                 {"qualifying_segments", result.answer.qualifying}};
    emit(opts, summary,
         "pipeline complete: " + std::to_string(result.revelation.labels.stressing_count()) +
             " stressing clients, " + std::to_string(result.answer.qualifying.size()) +
             " qualifying segments at context " + hedge_or(result.answer.context, "none") +
             "; reports in " + opts.out_dir + "\n");
    return kExitOk;
}

void add_dataset_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--cells", opts.cells, "cells.csv path")->required();
    cmd->add_option("--clients", opts.clients, "clients.csv path")->required();
    cmd->add_option("--events", opts.events, "events.csv path")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cellstress: reveal infrastructure-stressing clients, rank geodemographic "
                 "segments by fuzzy infrastructure-friendliness, and validate campaign what-ifs"};
    app.set_version_flag("--version", "cellstress 0.1.0");
    app.require_subcommand(1);

    CommonOpts synth_opts;
    cs::synth::SynthConfig synth_cfg;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic region as CSV files");
    synth->add_option("--out", synth_opts.out_dir, "output directory")->required();
    synth->add_option("--config", synth_opts.config_path, "generator config JSON");
    synth->add_option("--seed", synth_cfg.seed, "random seed");
    synth->add_option("--cells", synth_cfg.n_cells, "number of cells");
    synth->add_option("--clients", synth_cfg.n_clients, "number of clients");
    synth->add_option("--slots", synth_cfg.window_slots, "window length in 5-minute slots");
    synth->add_option("--planted-fraction", synth_cfg.planted_stressing_fraction,
                      "share of clients planted as stressing dwellers");
    synth->add_option("--peak-cells", synth_cfg.peak_cell_count, "number of saturated cells");
    synth->add_option("--headroom", synth_cfg.capacity_headroom,
                      "capacity multiple for non-peak cells");
    synth->add_option("--surge-clients", synth_cfg.surge_clients, "crowd-surge visitor count");
    synth->add_option("--surge-slots", synth_cfg.surge_slots, "crowd-surge duration in slots");
    synth->add_flag("--json", synth_opts.json_output, "machine-readable summary");

    CommonOpts reveal_opts;
    bool dump_occupancy = false;
    CLI::App* reveal = app.add_subcommand("reveal", "label infrastructure-stressing clients");
    add_dataset_options(reveal, reveal_opts);
    reveal->add_option("--out", reveal_opts.out_dir, "output directory")->required();
    reveal->add_option("--config", reveal_opts.config_path, "pipeline config JSON");
    reveal->add_flag("--dump-occupancy", dump_occupancy, "also write occupancy/footprint CSVs");
    reveal->add_flag("--json", reveal_opts.json_output, "machine-readable summary");

    CommonOpts rank_opts;
    std::string memberships_path, labels_path, rank_system = "mosaic";
    double rank_threshold = cs::fuzzy::kDefaultQualifyThreshold;
    CLI::App* rank = app.add_subcommand("rank", "rank segments by hedged friendliness");
    rank->add_option("--memberships", memberships_path, "memberships CSV (segment,f_if)");
    rank->add_option("--labels", labels_path, "labels.csv from a reveal run");
    rank->add_option("--clients", rank_opts.clients, "clients.csv (with --labels)");
    rank->add_option("--system", rank_system, "segmentation system: mosaic|telenor");
    rank->add_option("--threshold", rank_threshold, "qualification threshold");
    rank->add_option("--out", rank_opts.out_dir, "output directory")->required();
    rank->add_flag("--json", rank_opts.json_output, "machine-readable summary");

    CommonOpts load_opts;
    CLI::App* load = app.add_subcommand("assess-load", "compute the fuzzy infrastructure load");
    add_dataset_options(load, load_opts);
    load->add_option("--out", load_opts.out_dir, "output directory")->required();
    load->add_option("--config", load_opts.config_path, "pipeline config JSON");
    load->add_flag("--json", load_opts.json_output, "machine-readable summary");

    CommonOpts sim_opts;
    std::string sim_segment, sim_system = "mosaic", sim_memberships;
    long long sim_expected = 0;
    std::size_t sim_max_warnings = 20;
    bool sim_no_baseline = false;
    CLI::App* simulate = app.add_subcommand("simulate", "what-if a campaign against capacity");
    add_dataset_options(simulate, sim_opts);
    simulate->add_option("--segment", sim_segment, "target segment id")->required();
    simulate->add_option("--expected", sim_expected, "expected number of new clients")->required();
    simulate->add_option("--max-warnings", sim_max_warnings,
                         "warnings shown on the console (JSON keeps the full list)");
    simulate->add_flag("--no-baseline", sim_no_baseline,
                       "check the scaled footprint alone, ignoring current traffic");
    simulate->add_option("--system", sim_system, "segmentation system: mosaic|telenor");
    simulate->add_option("--memberships", sim_memberships,
                         "memberships CSV; skips the revelation pass");
    simulate->add_option("--config", sim_opts.config_path, "pipeline config JSON");
    simulate->add_option("--out", sim_opts.out_dir, "output directory")->required();
    simulate->add_flag("--json", sim_opts.json_output, "machine-readable summary");

    CommonOpts report_opts;
    std::string report_system;
    CLI::App* report = app.add_subcommand("report", "run the full pipeline and write all reports");
    add_dataset_options(report, report_opts);
    report->add_option("--out", report_opts.out_dir, "output directory")->required();
    report->add_option("--config", report_opts.config_path, "pipeline config JSON");
    report->add_option("--system", report_system, "segmentation system override");
    report->add_flag("--json", report_opts.json_output, "machine-readable summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed()) {
            if (!synth_opts.config_path.empty()) {
                // File values fill in whatever was not set on the command line.
                cs::synth::SynthConfig file_cfg =
                    cs::synth::load_synth_config(synth_opts.config_path);
                if (!synth->count("--seed")) synth_cfg.seed = file_cfg.seed;
                if (!synth->count("--cells")) synth_cfg.n_cells = file_cfg.n_cells;
                if (!synth->count("--clients")) synth_cfg.n_clients = file_cfg.n_clients;
                if (!synth->count("--slots")) synth_cfg.window_slots = file_cfg.window_slots;
                if (!synth->count("--planted-fraction")) {
                    synth_cfg.planted_stressing_fraction = file_cfg.planted_stressing_fraction;
                }
                if (!synth->count("--peak-cells")) {
                    synth_cfg.peak_cell_count = file_cfg.peak_cell_count;
                }
                if (!synth->count("--headroom")) {
                    synth_cfg.capacity_headroom = file_cfg.capacity_headroom;
                }
                if (!synth->count("--surge-clients")) {
                    synth_cfg.surge_clients = file_cfg.surge_clients;
                }
                if (!synth->count("--surge-slots")) synth_cfg.surge_slots = file_cfg.surge_slots;
                synth_cfg.roam_activity = file_cfg.roam_activity;
                synth_cfg.home_bias = file_cfg.home_bias;
            }
            return run_synth(synth_opts, synth_cfg);
        }
        if (reveal->parsed()) return run_reveal(reveal_opts, dump_occupancy);
        if (rank->parsed()) {
            return run_rank(rank_opts, memberships_path, labels_path, rank_system, rank_threshold);
        }
        if (load->parsed()) return run_assess_load(load_opts);
        if (simulate->parsed()) {
            return run_simulate(sim_opts, sim_segment, sim_expected, sim_no_baseline, sim_system,
                                sim_memberships, sim_max_warnings);
        }
        if (report->parsed()) return run_report(report_opts, report_system);
    } catch (const cs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
