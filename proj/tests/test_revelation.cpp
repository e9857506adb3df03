#include <doctest.h>

#include "cellstress/data_model.hpp"
#include "cellstress/errors.hpp"
#include "cellstress/revelation.hpp"

#include <set>
#include <string>
#include <vector>

using namespace cellstress;

namespace {

// A region with known ground truth and no randomness:
//   - cell H is kept saturated by 10 dwellers parked there all window long,
//   - a 3-slot crowd surge of 20 visitors (below the activity floor) presses
//     H to its capacity peak,
//   - 100 roamers live on cells R0..R9 and never touch H.
// Capacities: H at its exact demand peak, roam cells with 5x headroom.
struct PlantedRegion {
    data::Dataset dataset;
    std::vector<std::string> dwellers;
    std::vector<std::string> roamers;
};

PlantedRegion make_planted_region(double capacity_factor = 1.0) {
    const int slots = 100;
    std::vector<data::CellRecord> cells;
    cells.push_back({"H", 0, 0, 30.0 * capacity_factor});  // peak: 10 dwellers + 20 surge
    for (int j = 0; j < 10; ++j) {
        cells.push_back({"R" + std::to_string(j), 0, 0, 50.0 * capacity_factor});
    }

    PlantedRegion region;
    std::vector<data::ClientRecord> clients;
    std::vector<data::CdrEvent> events;
    std::uint32_t id = 0;

    for (int i = 0; i < 10; ++i, ++id) {
        std::string name = "d" + std::to_string(i);
        region.dwellers.push_back(name);
        clients.push_back({name, "M_hot", "T_hot"});
        for (int t = 0; t < slots; ++t) {
            events.push_back({id, static_cast<std::uint32_t>(t), 0});
        }
    }
    for (int i = 0; i < 20; ++i, ++id) {  // surge visitors: 3 active slots only
        clients.push_back({"s" + std::string(i < 10 ? "0" : "") + std::to_string(i),
                           "M_surge", "T_surge"});
        for (int t = 50; t < 53; ++t) {
            events.push_back({id, static_cast<std::uint32_t>(t), 0});
        }
    }
    for (int i = 0; i < 100; ++i, ++id) {
        std::string name = "r" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        region.roamers.push_back(name);
        clients.push_back({name, "M_roam", "T_roam"});
        const std::uint32_t cell = 1 + i % 10;
        for (int t = 0; t < slots; ++t) {
            events.push_back({id, static_cast<std::uint32_t>(t), cell});
        }
    }

    region.dataset = data::Dataset(cells, clients, std::move(events), slots);
    return region;
}

reveal::RevealConfig planted_config() {
    reveal::RevealConfig cfg;
    cfg.head_fraction = 0.05;  // head of 5 over the 110 rankable clients
    cfg.bottom_fraction = 0.05;
    cfg.hotspot.activity_floor = 10;
    return cfg;
}

}  // namespace

TEST_CASE("generous capacities reveal nobody") {
    PlantedRegion region = make_planted_region(100.0);  // nothing ever binds
    reveal::RevealResult result = reveal::reveal_is(region.dataset, planted_config());
    CHECK(result.labels.stressing_count() == 0);
    CHECK(result.trace.termination == reveal::Termination::x_stressing_positive);
    REQUIRE(result.trace.iterations.size() == 1);  // the loop still runs once
    CHECK(result.trace.iterations[0].x[0] > 0.0);
}

TEST_CASE("planted dwellers at a saturated cell are revealed, roamers are not") {
    PlantedRegion region = make_planted_region();
    reveal::RevealResult result = reveal::reveal_is(region.dataset, planted_config());

    for (const std::string& id : region.dwellers) CHECK(result.labels.is_stressing(id));
    for (const std::string& id : region.roamers) CHECK(!result.labels.is_stressing(id));
    CHECK(result.labels.stressing_count() == region.dwellers.size());

    // Stopping certificate: the loop ended because the head could grow.
    CHECK(result.trace.termination == reveal::Termination::x_stressing_positive);
    REQUIRE(!result.trace.iterations.empty());
    const reveal::IterationRecord& last = result.trace.iterations.back();
    CHECK(!last.confirmed);
    CHECK(last.x[0] > 1e-9);

    // Confirmed heads are pairwise disjoint and every client is labeled.
    std::set<std::string> seen;
    for (const reveal::IterationRecord& it : result.trace.iterations) {
        if (!it.confirmed) continue;
        for (const std::string& id : it.head) {
            CHECK(seen.insert(id).second);
        }
    }
    CHECK(result.labels.stressing.size() == region.dataset.clients().size());
}

TEST_CASE("revelation is deterministic") {
    PlantedRegion region = make_planted_region();
    reveal::RevealResult a = reveal::reveal_is(region.dataset, planted_config());
    reveal::RevealResult b = reveal::reveal_is(region.dataset, planted_config());
    CHECK(a.labels.stressing == b.labels.stressing);
    REQUIRE(a.trace.iterations.size() == b.trace.iterations.size());
    for (std::size_t i = 0; i < a.trace.iterations.size(); ++i) {
        CHECK(a.trace.iterations[i].head == b.trace.iterations[i].head);
        CHECK(a.trace.iterations[i].x == b.trace.iterations[i].x);
    }
}

TEST_CASE("each confirming iteration strictly grows the confirmed set") {
    PlantedRegion region = make_planted_region();
    reveal::RevealResult result = reveal::reveal_is(region.dataset, planted_config());
    std::size_t previous = 0;
    bool any_confirmed = false;
    for (const reveal::IterationRecord& it : result.trace.iterations) {
        if (!it.confirmed) continue;
        any_confirmed = true;
        CHECK(it.confirmed_total > previous);
        previous = it.confirmed_total;
    }
    CHECK(any_confirmed);
    CHECK(result.trace.iterations.size() <=
          region.dataset.clients().size() / 5 + 2);  // well inside the guard
}

TEST_CASE("too few rankable clients is an error") {
    PlantedRegion region = make_planted_region();
    reveal::RevealConfig cfg;          // default 1% head needs 100 rankable
    cfg.hotspot.activity_floor = 101;  // nobody qualifies
    CHECK_THROWS_AS(reveal::reveal_is(region.dataset, cfg), InsufficientClientsError);
}

TEST_CASE("build_scaling_problem keeps only occupied cell-slots") {
    PlantedRegion region = make_planted_region();
    std::vector<int> groups(region.dataset.clients().size(), 1);
    occupancy::FootprintTensor fp =
        occupancy::build_footprint(region.dataset, groups, {"stressing", "medium", "friendly"});
    lp::LpProblem p = reveal::build_scaling_problem(fp, region.dataset.cells(), 10.0);
    // H is occupied in all 100 slots, each roam cell likewise: 1100 rows.
    CHECK(p.constraints.size() == 1100);
    CHECK(p.group_sizes[1] == doctest::Approx(130.0));
}

TEST_CASE("is_frequency_by_segment is the definitional ratio") {
    std::vector<data::ClientRecord> clients;
    reveal::IsLabelMap labels;
    for (int i = 0; i < 10; ++i) {
        std::string id = "a" + std::to_string(i);
        clients.push_back({id, "SEG", "T0"});
        labels.stressing[id] = i < 2;  // 2 of 10
    }
    for (int i = 0; i < 4; ++i) {
        std::string id = "b" + std::to_string(i);
        clients.push_back({id, "CLEAN", "T0"});
        labels.stressing[id] = false;
    }
    auto freq = reveal::is_frequency_by_segment(labels, clients, data::Segmentation::mosaic);
    CHECK(freq.at("SEG") == doctest::Approx(0.2));
    CHECK(freq.at("CLEAN") == doctest::Approx(0.0));

    SUBCASE("explicit universe flags empty segments") {
        CHECK_THROWS_AS(reveal::is_frequency_by_segment(labels, clients, data::Segmentation::mosaic,
                                                        {"SEG", "CLEAN", "DESERTED"}),
                        EmptySegmentError);
    }
    SUBCASE("unlabeled clients are rejected") {
        clients.push_back({"mystery", "SEG", "T0"});
        CHECK_THROWS_AS(
            reveal::is_frequency_by_segment(labels, clients, data::Segmentation::mosaic),
            UnknownClientError);
    }
}

TEST_CASE("frequencies on a revealed region match a direct recount") {
    PlantedRegion region = make_planted_region();
    reveal::RevealResult result = reveal::reveal_is(region.dataset, planted_config());
    auto freq = reveal::is_frequency_by_segment(result.labels, region.dataset.clients(),
                                                data::Segmentation::mosaic);
    // Independent recount.
    std::size_t hot_is = 0, hot_all = 0;
    for (const data::ClientRecord& c : region.dataset.clients()) {
        if (c.mosaic_segment != "M_hot") continue;
        ++hot_all;
        if (result.labels.is_stressing(c.client_id)) ++hot_is;
    }
    CHECK(freq.at("M_hot") == doctest::Approx(static_cast<double>(hot_is) / hot_all));
    CHECK(freq.at("M_hot") == doctest::Approx(1.0));
    CHECK(freq.at("M_roam") == doctest::Approx(0.0));
}
