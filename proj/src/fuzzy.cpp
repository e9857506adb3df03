#include "cellstress/fuzzy.hpp"

#include "cellstress/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cellstress::fuzzy {

Membership::Membership(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error("membership value out of [0,1]: " + std::to_string(value));
    }
}

Membership negate(Membership f) { return Membership(1.0 - f.value()); }

double hedge_exponent(Hedge h) {
    switch (h) {
        case Hedge::rather: return 0.5;
        case Hedge::very: return 2.0;
        case Hedge::extremely: return 3.0;
    }
    return 1.0;
}

std::string_view hedge_name(Hedge h) {
    switch (h) {
        case Hedge::rather: return "rather";
        case Hedge::very: return "very";
        case Hedge::extremely: return "extremely";
    }
    return "?";
}

Hedge parse_hedge(std::string_view name) {
    if (name == "rather") return Hedge::rather;
    if (name == "very") return Hedge::very;
    if (name == "extremely") return Hedge::extremely;
    throw InvalidConfigError("unknown hedge: " + std::string(name));
}

Membership apply_hedge(Membership f, Hedge h) {
    const double v = f.value();
    switch (h) {
        case Hedge::rather: return Membership(std::sqrt(v));
        case Hedge::very: return Membership(v * v);
        case Hedge::extremely: return Membership(v * v * v);
    }
    return f;
}

bool HedgeVerdicts::at(Hedge h) const {
    switch (h) {
        case Hedge::rather: return rather;
        case Hedge::very: return very;
        case Hedge::extremely: return extremely;
    }
    return false;
}

HedgeVerdicts classify(Membership f_if, double threshold) {
    HedgeVerdicts v;
    v.rather = apply_hedge(f_if, Hedge::rather).value() >= threshold;
    v.very = apply_hedge(f_if, Hedge::very).value() >= threshold;
    v.extremely = apply_hedge(f_if, Hedge::extremely).value() >= threshold;
    return v;
}

double tier_anchor(TierLabel t) {
    switch (t) {
        case TierLabel::fully_out: return 0.0;
        case TierLabel::mostly_out: return 0.1;
        case TierLabel::more_or_less_out: return 0.4;
        case TierLabel::more_or_less_in: return 0.6;
        case TierLabel::mostly_in: return 0.9;
        case TierLabel::fully_in: return 1.0;
    }
    return 0.0;
}

std::string_view tier_name(TierLabel t) {
    switch (t) {
        case TierLabel::fully_out: return "fully_out";
        case TierLabel::mostly_out: return "mostly_out";
        case TierLabel::more_or_less_out: return "more_or_less_out";
        case TierLabel::more_or_less_in: return "more_or_less_in";
        case TierLabel::mostly_in: return "mostly_in";
        case TierLabel::fully_in: return "fully_in";
    }
    return "?";
}

TierLabel nearest_tier(Membership f) {
    constexpr std::array<TierLabel, 6> tiers{TierLabel::fully_out,        TierLabel::mostly_out,
                                             TierLabel::more_or_less_out, TierLabel::more_or_less_in,
                                             TierLabel::mostly_in,        TierLabel::fully_in};
    TierLabel best = TierLabel::fully_out;
    double best_dist = 2.0;
    for (TierLabel t : tiers) {  // ascending anchors: ties land on the higher one
        double dist = std::abs(f.value() - tier_anchor(t));
        if (dist <= best_dist) {
            best_dist = dist;
            best = t;
        }
    }
    return best;
}

SegmentMembership assess_segment(std::string segment, Membership f_is, double threshold) {
    SegmentMembership m;
    m.segment = std::move(segment);
    m.f_is = f_is;
    m.f_if = negate(f_is);
    for (std::size_t k = 0; k < kHedges.size(); ++k) {
        m.hedged[k] = apply_hedge(m.f_if, kHedges[k]).value();
    }
    m.verdicts = classify(m.f_if, threshold);
    return m;
}

std::vector<RankedSegment> rank_segments(std::vector<SegmentMembership> memberships, Hedge h,
                                         double threshold) {
    if (memberships.empty()) throw Error("cannot rank an empty segment list");
    std::vector<RankedSegment> out;
    out.reserve(memberships.size());
    for (SegmentMembership& m : memberships) {
        RankedSegment r;
        r.key = apply_hedge(m.f_if, h).value();
        r.qualifies = r.key >= threshold;
        r.membership = std::move(m);
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const RankedSegment& a, const RankedSegment& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.membership.segment < b.membership.segment;
    });
    return out;
}

Membership antenna_load(const occupancy::OccupancyMatrix& occ, int cell_index, double capacity) {
    if (capacity <= 0.0) throw InvalidConfigError("antenna capacity must be positive");
    if (cell_index < 0 || cell_index >= occ.cells) throw Error("cell index out of range");
    std::int32_t peak = 0;
    for (int t = 0; t < occ.slots; ++t) peak = std::max(peak, occ.at(t, cell_index));
    return Membership(std::min(1.0, peak / capacity));
}

Membership infrastructure_load(const std::vector<Membership>& per_antenna) {
    if (per_antenna.empty()) throw EmptyInfrastructureError();
    Membership best = per_antenna.front();
    for (const Membership& m : per_antenna) {
        if (m.value() > best.value()) best = m;
    }
    return best;
}

std::optional<Hedge> select_context(Membership load, double threshold) {
    std::optional<Hedge> strongest;
    for (Hedge h : kHedges) {  // ascending strength: rather, very, extremely
        if (apply_hedge(load, h).value() >= threshold) strongest = h;
    }
    return strongest;
}

QueryAnswer query(const std::vector<SegmentMembership>& memberships, Membership load,
                  double threshold) {
    QueryAnswer answer;
    answer.context = select_context(load, threshold);
    answer.unrestricted = !answer.context.has_value();
    const Hedge h = answer.context.value_or(Hedge::rather);
    answer.ranking = rank_segments(memberships, h, threshold);
    for (const RankedSegment& r : answer.ranking) {
        if (answer.unrestricted || r.qualifies) answer.qualifying.push_back(r.membership.segment);
    }
    return answer;
}

}  // namespace cellstress::fuzzy
