#include "cellstress/pipeline.hpp"

#include "cellstress/csv.hpp"
#include "cellstress/errors.hpp"
#include "cellstress/occupancy.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace cellstress::pipeline {

using nlohmann::json;

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidConfigError("bad config JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InvalidConfigError("config must be a JSON object");

    PipelineConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "head_fraction") cfg.reveal.head_fraction = value.get<double>();
            else if (key == "bottom_fraction") cfg.reveal.bottom_fraction = value.get<double>();
            else if (key == "x_max") cfg.reveal.x_max = value.get<double>();
            else if (key == "zero_tolerance") cfg.reveal.zero_tolerance = value.get<double>();
            else if (key == "activity_floor") cfg.reveal.hotspot.activity_floor = value.get<int>();
            else if (key == "hotspot_top_fraction") cfg.reveal.hotspot.top_fraction = value.get<double>();
            else if (key == "normalize_occupancy")
                cfg.reveal.hotspot.normalize_by_capacity = value.get<bool>();
            else if (key == "qualify_threshold") cfg.qualify_threshold = value.get<double>();
            else if (key == "system") cfg.system = data::parse_segmentation(value.get<std::string>());
            else if (key == "include_baseline") cfg.include_baseline = value.get<bool>();
            else if (key == "window_slots") cfg.window_slots = value.get<int>();
            else throw InvalidConfigError("unknown config key: " + key);
        } catch (const json::exception& e) {
            throw InvalidConfigError("bad value for config key '" + key + "': " + e.what());
        }
    }
    return cfg;
}

namespace {

json config_json(const PipelineConfig& cfg) {
    return json{{"head_fraction", cfg.reveal.head_fraction},
                {"bottom_fraction", cfg.reveal.bottom_fraction},
                {"x_max", cfg.reveal.x_max},
                {"zero_tolerance", cfg.reveal.zero_tolerance},
                {"activity_floor", cfg.reveal.hotspot.activity_floor},
                {"hotspot_top_fraction", cfg.reveal.hotspot.top_fraction},
                {"normalize_occupancy", cfg.reveal.hotspot.normalize_by_capacity},
                {"qualify_threshold", cfg.qualify_threshold},
                {"system", std::string(data::segmentation_name(cfg.system))},
                {"include_baseline", cfg.include_baseline},
                {"window_slots", cfg.window_slots}};
}

void dump_to(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string verdict_word(bool yes) { return yes ? "yes" : "no"; }

json hedge_json(const std::optional<fuzzy::Hedge>& h) {
    if (!h) return nullptr;
    return std::string(fuzzy::hedge_name(*h));
}

}  // namespace

std::string resolved_config_json(const PipelineConfig& cfg) { return config_json(cfg).dump(2); }

std::vector<fuzzy::SegmentMembership> load_memberships_csv(const std::string& path,
                                                           double threshold) {
    csv::Reader reader(path, {"segment", "f_if"});
    std::vector<fuzzy::SegmentMembership> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f[0].empty()) throw MalformedRowError(reader.line(), "empty segment id");
        double f_if = csv::parse_number(f[1], reader.line(), "f_if");
        if (f_if < 0.0 || f_if > 1.0) {
            throw MalformedRowError(reader.line(), "f_if must lie in [0,1]");
        }
        out.push_back(fuzzy::assess_segment(f[0], fuzzy::Membership(1.0 - f_if), threshold));
    }
    if (out.empty()) throw EmptyDatasetError();
    return out;
}

std::vector<fuzzy::SegmentMembership> memberships_from_labels(
    const reveal::IsLabelMap& labels, const std::vector<data::ClientRecord>& clients,
    data::Segmentation system, double threshold) {
    std::vector<fuzzy::SegmentMembership> out;
    for (const auto& [segment, f_is] : reveal::is_frequency_by_segment(labels, clients, system)) {
        out.push_back(fuzzy::assess_segment(segment, fuzzy::Membership(f_is), threshold));
    }
    return out;
}

void write_ranking_csv(const std::vector<fuzzy::SegmentMembership>& memberships,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "segment,f_if,f_sqrt,rather,f_sq,very,f_cube,extremely\n";
    std::vector<fuzzy::SegmentMembership> rows = memberships;
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.segment < b.segment; });
    for (const fuzzy::SegmentMembership& m : rows) {
        out << m.segment << ',' << csv::format_number(m.f_if.value()) << ','
            << csv::format_number(m.hedged[0]) << ',' << verdict_word(m.verdicts.rather) << ','
            << csv::format_number(m.hedged[1]) << ',' << verdict_word(m.verdicts.very) << ','
            << csv::format_number(m.hedged[2]) << ',' << verdict_word(m.verdicts.extremely) << '\n';
    }
}

void write_ranking_json(const std::vector<fuzzy::SegmentMembership>& memberships,
                        const std::string& path) {
    std::vector<fuzzy::SegmentMembership> rows = memberships;
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.segment < b.segment; });
    json arr = json::array();
    for (const fuzzy::SegmentMembership& m : rows) {
        arr.push_back({{"segment", m.segment},
                       {"f_is", m.f_is.value()},
                       {"f_if", m.f_if.value()},
                       {"rather", {{"value", m.hedged[0]}, {"qualifies", m.verdicts.rather}}},
                       {"very", {{"value", m.hedged[1]}, {"qualifies", m.verdicts.very}}},
                       {"extremely", {{"value", m.hedged[2]}, {"qualifies", m.verdicts.extremely}}},
                       {"tier", std::string(fuzzy::tier_name(fuzzy::nearest_tier(m.f_if)))}});
    }
    dump_to(json{{"segments", arr}}, path);
}

LoadReport assess_load(const data::Dataset& d, double threshold) {
    const occupancy::OccupancyMatrix occ = occupancy::build_occupancy(d);
    LoadReport report;
    std::vector<fuzzy::Membership> loads;
    for (std::size_t j = 0; j < d.cells().size(); ++j) {
        fuzzy::Membership m = fuzzy::antenna_load(occ, static_cast<int>(j), d.cells()[j].capacity);
        loads.push_back(m);
        report.per_antenna.emplace_back(d.cells()[j].cell_id, m.value());
    }
    std::sort(report.per_antenna.begin(), report.per_antenna.end());
    report.infrastructure = fuzzy::infrastructure_load(loads).value();
    report.context = fuzzy::select_context(fuzzy::Membership(report.infrastructure), threshold);
    return report;
}

void write_load_json(const LoadReport& report, const std::string& path) {
    json antennas = json::array();
    for (const auto& [cell, load] : report.per_antenna) {
        antennas.push_back({{"cell_id", cell}, {"load", load}});
    }
    dump_to(json{{"antennas", antennas},
                 {"infrastructure_load", report.infrastructure},
                 {"context_hedge", hedge_json(report.context)}},
            path);
}

void write_trace_json(const reveal::RevelationTrace& trace, const std::string& path) {
    json iterations = json::array();
    for (const reveal::IterationRecord& it : trace.iterations) {
        iterations.push_back({{"head", it.head},
                              {"x", {it.x[0], it.x[1], it.x[2]}},
                              {"confirmed", it.confirmed},
                              {"confirmed_total", it.confirmed_total}});
    }
    dump_to(json{{"iterations", iterations},
                 {"termination", reveal::termination_name(trace.termination)}},
            path);
}

void write_campaign_json(const campaign::CampaignReport& report,
                         const campaign::RecommendationVerdict& verdict, const std::string& path) {
    json warnings = json::array();
    for (const campaign::ViolationWarning& w : report.warnings) {
        warnings.push_back({{"cell_id", w.cell_id},
                            {"slot", w.slot},
                            {"projected_load", w.projected_load},
                            {"capacity", w.capacity}});
    }
    dump_to(json{{"alpha", report.alpha},
                 {"constraint_mode", report.include_baseline ? "baseline_plus_projection"
                                                             : "projection_only"},
                 {"verdict", verdict.accepted ? "accept" : "reject"},
                 {"reason", verdict.reason},
                 {"segment_qualifies", verdict.segment_qualifies},
                 {"context_hedge", hedge_json(verdict.context)},
                 {"warnings", warnings},
                 {"load_before", report.load_before.value()},
                 {"load_after", report.load_after.value()},
                 {"hedge_before", hedge_json(report.hedge_before)},
                 {"hedge_after", hedge_json(report.hedge_after)}},
            path);
}

PipelineResult run_pipeline(const DatasetPaths& paths, const PipelineConfig& cfg,
                            const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base(out_dir);

    const data::Dataset dataset =
        data::parse_dataset(paths.cells, paths.clients, paths.events, cfg.window_slots);

    PipelineResult result;
    result.revelation = reveal::reveal_is(dataset, cfg.reveal);
    result.memberships = memberships_from_labels(result.revelation.labels, dataset.clients(),
                                                 cfg.system, cfg.qualify_threshold);
    result.load = assess_load(dataset, cfg.qualify_threshold);
    result.answer = fuzzy::query(result.memberships, fuzzy::Membership(result.load.infrastructure),
                                 cfg.qualify_threshold);

    reveal::write_labels_csv(result.revelation.labels, dataset.clients(),
                             (base / "labels.csv").string());
    write_trace_json(result.revelation.trace, (base / "trace.json").string());
    write_ranking_csv(result.memberships, (base / "ranking.csv").string());
    write_ranking_json(result.memberships, (base / "ranking.json").string());
    write_load_json(result.load, (base / "load.json").string());

    json summary{{"config", config_json(cfg)},
                 {"clients", dataset.clients().size()},
                 {"cells", dataset.cells().size()},
                 {"events", dataset.events().size()},
                 {"stressing_clients", result.revelation.labels.stressing_count()},
                 {"termination", reveal::termination_name(result.revelation.trace.termination)},
                 {"iterations", result.revelation.trace.iterations.size()},
                 {"infrastructure_load", result.load.infrastructure},
                 {"context_hedge", hedge_json(result.answer.context)},
                 {"unrestricted", result.answer.unrestricted},
                 {"qualifying_segments", result.answer.qualifying}};
    dump_to(summary, (base / "summary.json").string());
    return result;
}

}  // namespace cellstress::pipeline
