#include <doctest.h>

#include "cellstress/errors.hpp"
#include "cellstress/fuzzy.hpp"
#include "cellstress/rng.hpp"

#include <cmath>
#include <vector>

using namespace cellstress;
using fuzzy::Hedge;
using fuzzy::Membership;

TEST_CASE("negate complements a membership") {
    CHECK(fuzzy::negate(Membership(0.0)).value() == doctest::Approx(1.0));
    CHECK(fuzzy::negate(Membership(1.0)).value() == doctest::Approx(0.0));
    // A 7% stressing share leaves the complement at 0.93.
    CHECK(fuzzy::negate(Membership(0.07)).value() == doctest::Approx(0.93));
}

TEST_CASE("negate is an involution") {
    rng::SplitMix64 g(5);
    for (int i = 0; i < 1000; ++i) {
        Membership f(g.next_unit());
        CHECK(fuzzy::negate(fuzzy::negate(f)).value() == doctest::Approx(f.value()).epsilon(1e-12));
    }
}

TEST_CASE("hedges are the fixed exponents") {
    CHECK(fuzzy::apply_hedge(Membership(0.96), Hedge::very).value() == doctest::Approx(0.9216));
    CHECK(fuzzy::apply_hedge(Membership(0.98), Hedge::extremely).value() ==
          doctest::Approx(0.941192));
    CHECK(fuzzy::apply_hedge(Membership(0.81), Hedge::rather).value() == doctest::Approx(0.9));
    for (Hedge h : fuzzy::kHedges) {
        CHECK(fuzzy::apply_hedge(Membership(1.0), h).value() == doctest::Approx(1.0));
        CHECK(fuzzy::apply_hedge(Membership(0.0), h).value() == doctest::Approx(0.0));
    }
}

TEST_CASE("hedge inclusion, range and monotonicity") {
    rng::SplitMix64 g(17);
    double prev_rather = 0.0, prev_f = -1.0;
    for (int i = 0; i < 2000; ++i) {
        double v = i < 1000 ? g.next_unit() : i % 2 ? 0.0 : 1.0;
        Membership f(v);
        double r = fuzzy::apply_hedge(f, Hedge::rather).value();
        double vv = fuzzy::apply_hedge(f, Hedge::very).value();
        double e = fuzzy::apply_hedge(f, Hedge::extremely).value();
        // extremely f is included in very f is included in rather f
        CHECK(e <= vv + 1e-15);
        CHECK(vv <= r + 1e-15);
        for (double x : {r, vv, e}) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        fuzzy::HedgeVerdicts verdicts = fuzzy::classify(f);
        if (verdicts.extremely) CHECK(verdicts.very);
        if (verdicts.very) CHECK(verdicts.rather);
        (void)prev_rather;
        (void)prev_f;
    }
    // monotone in f
    for (int i = 0; i + 1 < 100; ++i) {
        Membership lo(i / 100.0), hi((i + 1) / 100.0);
        for (Hedge h : fuzzy::kHedges) {
            CHECK(fuzzy::apply_hedge(lo, h).value() <= fuzzy::apply_hedge(hi, h).value());
        }
    }
}

TEST_CASE("classify applies the inclusive 0.9 threshold") {
    fuzzy::HedgeVerdicts b = fuzzy::classify(Membership(0.98));
    CHECK(b.rather);
    CHECK(b.very);
    CHECK(b.extremely);

    fuzzy::HedgeVerdicts c = fuzzy::classify(Membership(0.93));
    CHECK(c.rather);
    CHECK(!c.very);
    CHECK(!c.extremely);

    fuzzy::HedgeVerdicts zero = fuzzy::classify(Membership(0.0));
    CHECK(!zero.rather);
    CHECK(!zero.very);
    CHECK(!zero.extremely);

    // 0.95^2 = 0.9025 >= 0.9: inclusive boundary qualifies.
    CHECK(fuzzy::classify(Membership(0.95)).very);
}

namespace {

// The published fourteen-class tier table used across the ranking tests.
const std::vector<std::pair<std::string, double>> kMosaicTable{
    {"A", 0.96}, {"B", 0.98}, {"C", 0.93}, {"D", 0.92}, {"E", 0.96}, {"F", 0.92}, {"G", 0.93},
    {"H", 0.96}, {"I", 0.97}, {"J", 0.92}, {"K", 0.97}, {"L", 0.98}, {"M", 0.96}, {"N", 0.95}};

const std::vector<std::pair<std::string, double>> kTelenorTable{
    {"CA", 0.94}, {"MM", 0.99}, {"QA", 0.96}, {"T", 0.98}, {"CC", 0.92}, {"VA", 0.97}};

std::vector<fuzzy::SegmentMembership> table_memberships(
    const std::vector<std::pair<std::string, double>>& table) {
    std::vector<fuzzy::SegmentMembership> out;
    for (const auto& [segment, f_if] : table) {
        out.push_back(fuzzy::assess_segment(segment, Membership(1.0 - f_if)));
    }
    return out;
}

}  // namespace

TEST_CASE("fourteen-class table: 9 segments qualify as very IF") {
    auto ranked = fuzzy::rank_segments(table_memberships(kMosaicTable), Hedge::very);
    std::size_t qualifying = 0;
    for (const auto& r : ranked) qualifying += r.qualifies ? 1 : 0;
    CHECK(qualifying == 9);
    // and all fourteen stay rather-IF
    auto rather = fuzzy::rank_segments(table_memberships(kMosaicTable), Hedge::rather);
    for (const auto& r : rather) CHECK(r.qualifies);
}

TEST_CASE("six-class table: {MM, QA, T, VA} very, {MM, T, VA} extremely") {
    auto very = fuzzy::rank_segments(table_memberships(kTelenorTable), Hedge::very);
    std::vector<std::string> very_yes;
    for (const auto& r : very) {
        if (r.qualifies) very_yes.push_back(r.membership.segment);
    }
    CHECK(very_yes == std::vector<std::string>{"MM", "T", "VA", "QA"});

    auto extremely = fuzzy::rank_segments(table_memberships(kTelenorTable), Hedge::extremely);
    std::vector<std::string> extremely_yes;
    for (const auto& r : extremely) {
        if (r.qualifies) extremely_yes.push_back(r.membership.segment);
    }
    CHECK(extremely_yes == std::vector<std::string>{"MM", "T", "VA"});
}

TEST_CASE("rank order is hedge-invariant and ties break on segment id") {
    auto memberships = table_memberships(kMosaicTable);
    auto by_rather = fuzzy::rank_segments(memberships, Hedge::rather);
    auto by_extremely = fuzzy::rank_segments(memberships, Hedge::extremely);
    REQUIRE(by_rather.size() == by_extremely.size());
    for (std::size_t i = 0; i < by_rather.size(); ++i) {
        CHECK(by_rather[i].membership.segment == by_extremely[i].membership.segment);
    }
    // B and L share f_if 0.98: id order decides.
    CHECK(by_rather[0].membership.segment == "B");
    CHECK(by_rather[1].membership.segment == "L");

    auto single = fuzzy::rank_segments({fuzzy::assess_segment("solo", Membership(0.2))},
                                       Hedge::very);
    CHECK(single.size() == 1);
    CHECK(single[0].membership.segment == "solo");
}

TEST_CASE("antenna and infrastructure load") {
    occupancy::OccupancyMatrix occ;
    occ.slots = 4;
    occ.cells = 2;
    occ.counts = {10, 0, 45, 0, 30, 0, 12, 0};
    CHECK(fuzzy::antenna_load(occ, 0, 50.0).value() == doctest::Approx(0.9));
    CHECK(fuzzy::antenna_load(occ, 1, 50.0).value() == doctest::Approx(0.0));

    occ.counts = {60, 0, 0, 0, 0, 0, 0, 0};
    CHECK(fuzzy::antenna_load(occ, 0, 50.0).value() == doctest::Approx(1.0));  // clamped

    CHECK(fuzzy::infrastructure_load({Membership(0.5), Membership(0.9)}).value() ==
          doctest::Approx(0.9));
    CHECK(fuzzy::infrastructure_load({Membership(0.2)}).value() == doctest::Approx(0.2));
    CHECK_THROWS_AS(fuzzy::infrastructure_load({}), EmptyInfrastructureError);
}

TEST_CASE("infrastructure load equals a brute-force max over all readings") {
    rng::SplitMix64 g(23);
    occupancy::OccupancyMatrix occ;
    occ.slots = 12;
    occ.cells = 7;
    occ.counts.assign(occ.slots * occ.cells, 0);
    for (auto& c : occ.counts) c = static_cast<std::int32_t>(g.below(40));
    std::vector<double> capacities;
    std::vector<Membership> loads;
    for (int j = 0; j < occ.cells; ++j) {
        capacities.push_back(30.0 + g.below(30));
        loads.push_back(fuzzy::antenna_load(occ, j, capacities[j]));
    }
    double expected = 0.0;
    for (int t = 0; t < occ.slots; ++t) {
        for (int j = 0; j < occ.cells; ++j) {
            expected = std::max(expected, std::min(1.0, occ.at(t, j) / capacities[j]));
        }
    }
    CHECK(fuzzy::infrastructure_load(loads).value() == doctest::Approx(expected));
}

TEST_CASE("select_context picks the strongest qualifying hedge") {
    // 0.95: sqrt 0.9747 and square 0.9025 qualify, cube 0.857 does not.
    CHECK(fuzzy::select_context(Membership(0.95)) == Hedge::very);
    CHECK(fuzzy::select_context(Membership(0.5)) == std::nullopt);  // sqrt 0.707 < 0.9
    CHECK(fuzzy::select_context(Membership(1.0)) == Hedge::extremely);
    CHECK(fuzzy::select_context(Membership(0.85)) == Hedge::rather);
}

TEST_CASE("query answers follow the load context") {
    auto mosaic = table_memberships(kMosaicTable);

    SUBCASE("rather context keeps all fourteen segments") {
        fuzzy::QueryAnswer a = fuzzy::query(mosaic, Membership(0.85));
        REQUIRE(a.context == Hedge::rather);
        CHECK(a.qualifying.size() == 14);
    }
    SUBCASE("extremely context keeps the three-strong shortlist") {
        fuzzy::QueryAnswer a = fuzzy::query(table_memberships(kTelenorTable), Membership(1.0));
        REQUIRE(a.context == Hedge::extremely);
        CHECK(a.qualifying == std::vector<std::string>{"MM", "T", "VA"});
    }
    SUBCASE("no context means no restriction") {
        fuzzy::QueryAnswer a = fuzzy::query(mosaic, Membership(0.3));
        CHECK(a.unrestricted);
        CHECK(a.qualifying.size() == 14);
    }
}

TEST_CASE("tier labels snap to the nearest anchor") {
    CHECK(fuzzy::nearest_tier(Membership(1.0)) == fuzzy::TierLabel::fully_in);
    CHECK(fuzzy::nearest_tier(Membership(0.93)) == fuzzy::TierLabel::mostly_in);
    CHECK(fuzzy::nearest_tier(Membership(0.05)) == fuzzy::TierLabel::mostly_out);
    CHECK(fuzzy::nearest_tier(Membership(0.0)) == fuzzy::TierLabel::fully_out);
    CHECK(fuzzy::nearest_tier(Membership(0.5)) == fuzzy::TierLabel::more_or_less_in);  // tie up
}

TEST_CASE("membership values outside [0,1] are rejected") {
    CHECK_THROWS_AS(Membership(-0.1), Error);
    CHECK_THROWS_AS(Membership(1.1), Error);
}
