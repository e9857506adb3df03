#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace cellstress::lp {

// Groups the scaling program reasons about, in tie-break order.
enum class Group : int { stressing = 0, medium = 1, friendly = 2 };
inline constexpr int kGroups = 3;

// One (cell, slot) capacity row: sum_i usage[i] * x[i] <= capacity.
struct Constraint {
    std::array<double, kGroups> usage{};
    double capacity = 0.0;
};

// Maximize sum_i group_sizes[i] * x[i] over 0 <= x[i] <= x_max subject to the rows.
struct LpProblem {
    std::array<double, kGroups> group_sizes{};
    std::vector<Constraint> constraints;
    double x_max = 10.0;
};

struct ScalingSolution {
    std::array<double, kGroups> x{};
    double objective = 0.0;
};

// Exact solver. Among objective-optimal points it returns the one that
// lexicographically maximizes (x[stressing], x[medium], x[friendly]), so a
// reported x[stressing] of zero means zero was forced, not picked arbitrarily.
// x = 0 is always feasible, so this never fails; groups touched by no
// constraint come back at x_max.
ScalingSolution solve(const LpProblem& p);

// Independent check: enumerates every vertex of the feasible polytope
// (3-subsets of constraint planes and box facets) and picks the best under the
// same lexicographic order. Throws TooLargeError beyond `constraint_cap`
// non-redundant rows.
ScalingSolution oracle_solve(const LpProblem& p, std::size_t constraint_cap = 512);

bool is_feasible(const LpProblem& p, const std::array<double, kGroups>& x, double tol = 1e-9);

}  // namespace cellstress::lp
