#include <doctest.h>

#include "cellstress/campaign.hpp"
#include "cellstress/data_model.hpp"
#include "cellstress/errors.hpp"
#include "cellstress/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace cellstress;

namespace {

struct Scenario {
    data::Dataset dataset;
    occupancy::OccupancyMatrix occ;
    occupancy::FootprintTensor footprint;
};

// Random but seeded region; capacities are drawn at or above the demand peak
// unless `tight` asks for overloaded baselines.
Scenario random_scenario(std::uint64_t seed, bool tight = false) {
    rng::SplitMix64 g(seed);
    const int n_cells = 4 + static_cast<int>(g.below(4));
    const int n_clients = 30 + static_cast<int>(g.below(40));
    const int slots = 24;

    std::vector<data::ClientRecord> clients;
    std::vector<data::CdrEvent> events;
    const char* segments[3] = {"S0", "S1", "S2"};
    for (int i = 0; i < n_clients; ++i) {
        clients.push_back({"u" + std::to_string(100 + i), segments[g.below(3)], "T0"});
        for (int t = 0; t < slots; ++t) {
            if (g.chance(0.5)) {
                events.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t),
                                  g.below(static_cast<std::uint32_t>(n_cells))});
            }
        }
    }

    // Realized peaks decide capacities.
    std::vector<std::int32_t> peak(n_cells, 1);
    {
        std::vector<std::int32_t> counts(static_cast<std::size_t>(slots) * n_cells, 0);
        for (const data::CdrEvent& e : events) {
            std::int32_t& n = counts[e.slot * n_cells + e.cell];
            peak[e.cell] = std::max(peak[e.cell], ++n);
        }
    }
    std::vector<data::CellRecord> cells;
    for (int j = 0; j < n_cells; ++j) {
        double capacity = tight ? std::max(1.0, peak[j] * 0.8)
                                : peak[j] + static_cast<double>(g.below(10));
        cells.push_back({"c" + std::to_string(j), 0, 0, capacity});
    }

    Scenario s{data::Dataset(cells, clients, std::move(events), slots), {}, {}};
    s.occ = occupancy::build_occupancy(s.dataset);
    s.footprint = occupancy::build_segment_footprint(s.dataset, data::Segmentation::mosaic);
    return s;
}

// Brute-force violation scan, independent of simulate().
std::set<std::pair<std::string, int>> scan_violations(const Scenario& s, const std::string& segment,
                                                      double alpha, bool include_baseline) {
    std::set<std::pair<std::string, int>> out;
    int g = *s.footprint.group_index(segment);
    for (int t = 0; t < s.occ.slots; ++t) {
        for (int j = 0; j < s.occ.cells; ++j) {
            double projected = (include_baseline ? s.occ.at(t, j) : 0.0) +
                               alpha * s.footprint.at(g, t, j);
            if (projected > s.dataset.cells()[j].capacity + 1e-9) {
                out.insert({s.dataset.cells()[j].cell_id, t});
            }
        }
    }
    return out;
}

std::set<std::pair<std::string, int>> warning_keys(const campaign::CampaignReport& r) {
    std::set<std::pair<std::string, int>> out;
    for (const campaign::ViolationWarning& w : r.warnings) out.insert({w.cell_id, w.slot});
    return out;
}

}  // namespace

TEST_CASE("alpha is the expected-yield to population ratio") {
    CHECK(campaign::compute_alpha(0, 27010) == doctest::Approx(0.0));
    CHECK(campaign::compute_alpha(27010, 27010) == doctest::Approx(1.0));
    CHECK(campaign::compute_alpha(1500, 27010) == doctest::Approx(1500.0 / 27010.0));
    CHECK(campaign::compute_alpha(1500, 27010) == doctest::Approx(0.0555350).epsilon(1e-5));
    CHECK_THROWS_AS(campaign::compute_alpha(5, 0), ZeroPopulationError);
    CHECK_THROWS_AS(campaign::compute_alpha(-1, 10), InvalidConfigError);
}

TEST_CASE("zero expected clients never warn and leave the load untouched") {
    Scenario s = random_scenario(11);
    campaign::CampaignSpec spec{"S1", 0, data::Segmentation::mosaic, true};
    campaign::CampaignReport r = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
    CHECK(r.alpha == 0.0);
    CHECK(r.warnings.empty());
    CHECK(r.load_after.value() == r.load_before.value());  // exact at alpha = 0
    CHECK(r.hedge_after == r.hedge_before);
}

TEST_CASE("an overloaded baseline warns regardless of alpha") {
    Scenario s = random_scenario(13, /*tight=*/true);
    campaign::CampaignSpec spec{"S0", 0, data::Segmentation::mosaic, true};
    campaign::CampaignReport r = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
    CHECK(!r.warnings.empty());

    // The literal mode checks only the scaled footprint, so alpha = 0 is clean.
    spec.include_baseline = false;
    campaign::CampaignReport literal = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
    CHECK(literal.warnings.empty());
}

TEST_CASE("a campaign sized to overflow exactly one cell-slot yields exactly that warning") {
    // Cell X filled to 5 of 10 by segment S at slot 0; cell Y idle and huge.
    std::vector<data::CellRecord> cells{{"X", 0, 0, 10}, {"Y", 0, 0, 100}};
    std::vector<data::ClientRecord> clients;
    std::vector<data::CdrEvent> events;
    for (int i = 0; i < 5; ++i) {
        clients.push_back({"u" + std::to_string(i), "S", "T"});
        events.push_back({static_cast<std::uint32_t>(i), 0, 0});
        events.push_back({static_cast<std::uint32_t>(i), 1, 1});
    }
    data::Dataset d(cells, clients, events, 4);
    occupancy::OccupancyMatrix occ = occupancy::build_occupancy(d);
    occupancy::FootprintTensor fp = occupancy::build_segment_footprint(d, data::Segmentation::mosaic);

    // alpha = 6/5: projected at (X,0) = 5 + 1.2*5 = 11 > 10; (Y,1) = 5 + 6 = 11 <= 100.
    campaign::CampaignSpec spec{"S", 6, data::Segmentation::mosaic, true};
    campaign::CampaignReport r = campaign::simulate(d, occ, fp, spec);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].cell_id == "X");
    CHECK(r.warnings[0].slot == 0);
    CHECK(r.warnings[0].projected_load == doctest::Approx(11.0));
    CHECK(r.warnings[0].capacity == doctest::Approx(10.0));

    Scenario s{std::move(d), std::move(occ), std::move(fp)};
    CHECK(warning_keys(r) == scan_violations(s, "S", r.alpha, true));
}

TEST_CASE("simulate agrees with the exhaustive scan on random regions") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL, 6ULL}) {
        Scenario s = random_scenario(seed, seed % 2 == 0);
        rng::SplitMix64 g(seed * 77);
        for (const char* segment : {"S0", "S2"}) {
            long long expected = g.below(200);
            for (bool baseline : {true, false}) {
                campaign::CampaignSpec spec{segment, expected, data::Segmentation::mosaic, baseline};
                campaign::CampaignReport r = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
                INFO("seed ", seed, " segment ", segment, " baseline ", baseline);
                CHECK(warning_keys(r) == scan_violations(s, segment, r.alpha, baseline));
                // canonical ordering
                CHECK(std::is_sorted(r.warnings.begin(), r.warnings.end(),
                                     [](const auto& a, const auto& b) {
                                         return std::tie(a.cell_id, a.slot) <
                                                std::tie(b.cell_id, b.slot);
                                     }));
            }
        }
    }
}

TEST_CASE("warnings grow monotonically with alpha and the load hedge never relaxes") {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        Scenario s = random_scenario(seed);
        double prev_load = -1.0;
        std::set<std::pair<std::string, int>> prev_warnings;
        for (long long expected : {0LL, 10LL, 40LL, 120LL, 400LL}) {
            campaign::CampaignSpec spec{"S1", expected, data::Segmentation::mosaic, true};
            campaign::CampaignReport r = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
            auto keys = warning_keys(r);
            CHECK(std::includes(keys.begin(), keys.end(), prev_warnings.begin(),
                                prev_warnings.end()));
            CHECK(r.load_after.value() >= prev_load);
            CHECK(r.load_after.value() >= r.load_before.value());
            prev_warnings = std::move(keys);
            prev_load = r.load_after.value();
        }
    }
}

TEST_CASE("unknown target segment is rejected") {
    Scenario s = random_scenario(31);
    campaign::CampaignSpec spec{"NOPE", 10, data::Segmentation::mosaic, true};
    CHECK_THROWS_AS(campaign::simulate(s.dataset, s.occ, s.footprint, spec), UnknownSegmentError);
}

TEST_CASE("validate_recommendation accepts only qualified and violation-free campaigns") {
    std::vector<fuzzy::SegmentMembership> memberships{
        fuzzy::assess_segment("GOOD", fuzzy::Membership(0.02)),  // f_if 0.98: extremely IF
        fuzzy::assess_segment("SHAKY", fuzzy::Membership(0.25)),
    };

    campaign::CampaignReport clean;
    clean.alpha = 0.05;

    SUBCASE("qualifying segment with no warnings is accepted") {
        auto v = campaign::validate_recommendation(memberships, fuzzy::Membership(0.95), clean,
                                                   "GOOD");
        CHECK(v.accepted);
        CHECK(v.context == fuzzy::Hedge::very);
        CHECK(v.segment_qualifies);
    }
    SUBCASE("an accepted verdict implies zero violations") {
        campaign::CampaignReport bad = clean;
        bad.warnings.push_back({"X", 3, 12.0, 10.0});
        auto v = campaign::validate_recommendation(memberships, fuzzy::Membership(0.95), bad,
                                                   "GOOD");
        CHECK(!v.accepted);
        CHECK(v.segment_qualifies);
        CHECK(v.violation_count == 1);
    }
    SUBCASE("non-qualifying segment is rejected even without warnings") {
        auto v = campaign::validate_recommendation(memberships, fuzzy::Membership(0.95), clean,
                                                   "SHAKY");
        CHECK(!v.accepted);
        CHECK(!v.segment_qualifies);
    }
    SUBCASE("an unloaded network restricts nothing") {
        auto v = campaign::validate_recommendation(memberships, fuzzy::Membership(0.2), clean,
                                                   "SHAKY");
        CHECK(v.accepted);
        CHECK(!v.context.has_value());
    }
    SUBCASE("unknown segment is an error") {
        CHECK_THROWS_AS(campaign::validate_recommendation(memberships, fuzzy::Membership(0.95),
                                                          clean, "GONE"),
                        UnknownSegmentError);
    }
}

TEST_CASE("a modest campaign on an uncongested region is accepted end to end") {
    Scenario s = random_scenario(41);  // capacities at or above peak
    // Double the capacities so the small projection cannot overflow anywhere.
    {
        std::vector<data::CellRecord> cells = s.dataset.cells();
        for (data::CellRecord& c : cells) c.capacity *= 2.0;
        s.dataset = data::Dataset(cells, s.dataset.clients(),
                                  std::vector<data::CdrEvent>(s.dataset.events().begin(),
                                                              s.dataset.events().end()),
                                  s.dataset.window_slots());
    }
    campaign::CampaignSpec spec{"S1", 3, data::Segmentation::mosaic, true};
    campaign::CampaignReport r = campaign::simulate(s.dataset, s.occ, s.footprint, spec);
    REQUIRE(r.warnings.empty());

    std::vector<fuzzy::SegmentMembership> memberships{
        fuzzy::assess_segment("S1", fuzzy::Membership(0.02))};  // extremely IF target
    auto v = campaign::validate_recommendation(memberships, r.load_before, r, "S1");
    CHECK(v.accepted);
    CHECK(v.accepted == (v.segment_qualifies && r.warnings.empty()));
}
