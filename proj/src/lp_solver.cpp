#include "cellstress/lp_solver.hpp"

#include "cellstress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cellstress::lp {

namespace {

constexpr double kTieTol = 1e-9;

void validate(const LpProblem& p) {
    if (!(p.x_max > 0.0) || !std::isfinite(p.x_max)) {
        throw InvalidConfigError("x_max must be positive and finite");
    }
    for (double s : p.group_sizes) {
        if (s < 0.0 || !std::isfinite(s)) throw InvalidConfigError("group sizes must be non-negative");
    }
    for (const Constraint& c : p.constraints) {
        if (!(c.capacity > 0.0) || !std::isfinite(c.capacity)) {
            throw InvalidConfigError("constraint capacities must be positive");
        }
        for (double u : c.usage) {
            if (u < 0.0 || !std::isfinite(u)) throw InvalidConfigError("usage must be non-negative");
        }
    }
}

using Row = std::array<double, kGroups>;  // normalized: row . x <= 1

// Drops vacuous, duplicate and componentwise-dominated rows. Sound for x >= 0:
// if a' >= a componentwise then a.x <= a'.x <= 1 already.
std::vector<Row> normalized_rows(const LpProblem& p) {
    std::vector<Row> rows;
    rows.reserve(p.constraints.size());
    for (const Constraint& c : p.constraints) {
        Row r{};
        bool any = false;
        for (int i = 0; i < kGroups; ++i) {
            r[i] = c.usage[i] / c.capacity;
            any = any || r[i] > 0.0;
        }
        if (any) rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    // Scan in decreasing coefficient-sum order: a dominating row always has the
    // larger sum, so it is already in `kept` when its victims arrive.
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a[0] + a[1] + a[2] > b[0] + b[1] + b[2];
    });
    std::vector<Row> kept;
    for (const Row& r : rows) {
        bool dominated = false;
        for (const Row& k : kept) {
            if (k[0] >= r[0] && k[1] >= r[1] && k[2] >= r[2]) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(r);
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Bounded-variable primal simplex on: max c.x, rows . x <= 1, 0 <= x <= u.
// Columns 0..2 are structural, the rest slacks. The lexicographic refinement
// runs extra objective stages restricted to columns whose reduced cost is zero
// in every earlier (frozen) stage, which keeps all earlier optima intact.
// ---------------------------------------------------------------------------
class BoundedSimplex {
public:
    BoundedSimplex(const std::vector<Row>& rows, double x_max)
        : m_(rows.size()), cols_(kGroups + rows.size()), x_max_(x_max) {
        tab_.assign(m_ * cols_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            for (int i = 0; i < kGroups; ++i) tab_[r * cols_ + i] = rows[r][i];
            tab_[r * cols_ + kGroups + r] = 1.0;
        }
        basic_.resize(m_);
        value_.assign(m_, 1.0);  // slacks start basic at the normalized rhs
        state_.assign(cols_, AtLower);
        for (std::size_t r = 0; r < m_; ++r) {
            basic_[r] = kGroups + r;
            state_[kGroups + r] = Basic;
        }
    }

    // Runs one objective stage; earlier stages stay optimal.
    void maximize(const std::array<double, kGroups>& c) {
        std::vector<double> obj(cols_, 0.0);
        for (int i = 0; i < kGroups; ++i) obj[i] = c[i];
        // Price out the current basis so obj holds reduced costs.
        for (std::size_t r = 0; r < m_; ++r) {
            double cb = obj[basic_[r]];
            if (cb != 0.0) {
                for (std::size_t j = 0; j < cols_; ++j) obj[j] -= cb * tab_[r * cols_ + j];
            }
        }
        double scale = 1.0;
        for (int i = 0; i < kGroups; ++i) scale = std::max(scale, std::abs(c[i]));
        const double dtol = kTieTol * scale;

        std::size_t iterations = 0;
        const std::size_t bland_after = 200 + 20 * m_;
        const std::size_t hard_cap = 20000 + 200 * m_;
        while (iterations++ < hard_cap) {
            bool bland = iterations > bland_after;
            std::size_t enter = cols_;
            double best = dtol;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (state_[j] == Basic) continue;
                if (!frozen_zero(j)) continue;
                double d = state_[j] == AtLower ? obj[j] : -obj[j];
                if (d <= dtol) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (d > best) {
                    best = d;
                    enter = j;
                }
            }
            if (enter == cols_) break;  // stage optimal

            const double dir = state_[enter] == AtLower ? 1.0 : -1.0;
            const double enter_cap = upper(enter) - lower(enter);  // bound-to-bound travel

            // Ratio test: smallest travel before a basic variable hits a bound.
            double t_best = enter_cap;
            std::size_t leave_row = m_;
            bool leave_at_upper = false;
            for (std::size_t r = 0; r < m_; ++r) {
                const double y = tab_[r * cols_ + enter];
                const double g = dir * y;
                if (g > 1e-11) {
                    double t = (value_[r] - lower(basic_[r])) / g;
                    if (t < t_best - 1e-12 ||
                        (t < t_best + 1e-12 &&
                         (leave_row == m_ ||
                          (bland ? basic_[r] < basic_[leave_row]
                                 : std::abs(y) > std::abs(tab_[leave_row * cols_ + enter]))))) {
                        t_best = std::max(0.0, t);
                        leave_row = r;
                        leave_at_upper = false;
                    }
                } else if (g < -1e-11) {
                    const double ub = upper(basic_[r]);
                    if (ub == std::numeric_limits<double>::infinity()) continue;
                    double t = (ub - value_[r]) / (-g);
                    if (t < t_best - 1e-12 ||
                        (t < t_best + 1e-12 &&
                         (leave_row == m_ ||
                          (bland ? basic_[r] < basic_[leave_row]
                                 : std::abs(y) > std::abs(tab_[leave_row * cols_ + enter]))))) {
                        t_best = std::max(0.0, t);
                        leave_row = r;
                        leave_at_upper = true;
                    }
                }
            }

            if (leave_row == m_) {
                if (enter_cap == std::numeric_limits<double>::infinity()) break;  // cannot happen: box
                // Bound flip, no basis change.
                for (std::size_t r = 0; r < m_; ++r) {
                    value_[r] -= dir * enter_cap * tab_[r * cols_ + enter];
                }
                state_[enter] = state_[enter] == AtLower ? AtUpper : AtLower;
                continue;
            }

            for (std::size_t r = 0; r < m_; ++r) {
                value_[r] -= dir * t_best * tab_[r * cols_ + enter];
            }
            const double entering_value =
                (state_[enter] == AtLower ? lower(enter) : upper(enter)) + dir * t_best;

            pivot(leave_row, enter, obj);
            state_[basic_[leave_row]] = leave_at_upper ? AtUpper : AtLower;
            basic_[leave_row] = enter;
            state_[enter] = Basic;
            value_[leave_row] = entering_value;
        }
        frozen_.push_back({std::move(obj), dtol});
    }

    std::array<double, kGroups> solution() const {
        std::array<double, kGroups> x{};
        for (int i = 0; i < kGroups; ++i) {
            switch (state_[i]) {
                case AtLower: x[i] = 0.0; break;
                case AtUpper: x[i] = x_max_; break;
                case Basic:
                    for (std::size_t r = 0; r < m_; ++r) {
                        if (basic_[r] == static_cast<std::size_t>(i)) x[i] = value_[r];
                    }
                    break;
            }
            x[i] = std::clamp(x[i], 0.0, x_max_);
        }
        return x;
    }

private:
    enum State { AtLower, AtUpper, Basic };
    struct FrozenObjective {
        std::vector<double> reduced;
        double tol;
    };

    double lower(std::size_t) const { return 0.0; }
    double upper(std::size_t j) const {
        return j < kGroups ? x_max_ : std::numeric_limits<double>::infinity();
    }

    bool frozen_zero(std::size_t j) const {
        for (const FrozenObjective& f : frozen_) {
            if (std::abs(f.reduced[j]) > f.tol) return false;
        }
        return true;
    }

    void pivot(std::size_t prow, std::size_t pcol, std::vector<double>& obj) {
        double* prow_ptr = &tab_[prow * cols_];
        const double piv = prow_ptr[pcol];
        for (std::size_t j = 0; j < cols_; ++j) prow_ptr[j] /= piv;
        prow_ptr[pcol] = 1.0;

        auto eliminate = [&](double* row) {
            const double f = row[pcol];
            if (f == 0.0) return;
            for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow_ptr[j];
            row[pcol] = 0.0;
        };
        for (std::size_t r = 0; r < m_; ++r) {
            if (r != prow) eliminate(&tab_[r * cols_]);
        }
        eliminate(obj.data());
        for (FrozenObjective& f : frozen_) eliminate(f.reduced.data());
    }

    std::size_t m_;
    std::size_t cols_;
    double x_max_;
    std::vector<double> tab_;
    std::vector<std::size_t> basic_;
    std::vector<double> value_;
    std::vector<State> state_;
    std::vector<FrozenObjective> frozen_;
};

double objective_of(const LpProblem& p, const std::array<double, kGroups>& x) {
    double z = 0.0;
    for (int i = 0; i < kGroups; ++i) z += p.group_sizes[i] * x[i];
    return z;
}

}  // namespace

ScalingSolution solve(const LpProblem& p) {
    validate(p);
    const std::vector<Row> rows = normalized_rows(p);

    BoundedSimplex simplex(rows, p.x_max);
    simplex.maximize(p.group_sizes);
    for (int i = 0; i < kGroups; ++i) {
        std::array<double, kGroups> axis{};
        axis[i] = 1.0;
        simplex.maximize(axis);
    }

    ScalingSolution out;
    out.x = simplex.solution();
    // Snap solver noise off exact zeros and bounds.
    for (int i = 0; i < kGroups; ++i) {
        if (std::abs(out.x[i]) < 1e-11) out.x[i] = 0.0;
        if (std::abs(out.x[i] - p.x_max) < 1e-11) out.x[i] = p.x_max;
    }
    out.objective = objective_of(p, out.x);
    return out;
}

bool is_feasible(const LpProblem& p, const std::array<double, kGroups>& x, double tol) {
    for (int i = 0; i < kGroups; ++i) {
        if (x[i] < -tol || x[i] > p.x_max + tol) return false;
    }
    for (const Constraint& c : p.constraints) {
        double lhs = 0.0;
        for (int i = 0; i < kGroups; ++i) lhs += c.usage[i] * x[i];
        if (lhs > c.capacity + tol * (1.0 + std::abs(c.capacity))) return false;
    }
    return true;
}

namespace {

// Lexicographic (objective, x0, x1, x2) comparison with a tolerance per level.
bool lex_better(const LpProblem& p, const std::array<double, kGroups>& a,
                const std::array<double, kGroups>& b) {
    const double za = objective_of(p, a);
    const double zb = objective_of(p, b);
    if (std::abs(za - zb) > kTieTol * std::max(1.0, std::max(std::abs(za), std::abs(zb)))) {
        return za > zb;
    }
    for (int i = 0; i < kGroups; ++i) {
        if (std::abs(a[i] - b[i]) > kTieTol * std::max(1.0, std::max(std::abs(a[i]), std::abs(b[i])))) {
            return a[i] > b[i];
        }
    }
    return false;
}

struct Plane {
    std::array<double, kGroups> n{};
    double rhs = 0.0;
};

bool solve3x3(const std::array<Plane, 3>& planes, std::array<double, kGroups>& x) {
    double a[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a[r][c] = planes[r].n[c];
        a[r][3] = planes[r].rhs;
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int i = 0; i < 3; ++i) x[i] = a[i][3] / a[i][i];
    return true;
}

}  // namespace

ScalingSolution oracle_solve(const LpProblem& p, std::size_t constraint_cap) {
    validate(p);

    // The oracle keeps its own redundancy scan so a pruning bug in solve()
    // cannot hide here: candidates are checked against every original row below.
    std::vector<Row> rows;
    for (const Constraint& c : p.constraints) {
        Row r{};
        bool any = false;
        for (int i = 0; i < kGroups; ++i) {
            r[i] = c.usage[i] / c.capacity;
            any = any || r[i] > 0.0;
        }
        if (any) rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::vector<Row> reduced;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < rows.size() && !dominated; ++k) {
            if (k == i) continue;
            bool geq = rows[k][0] >= rows[i][0] && rows[k][1] >= rows[i][1] && rows[k][2] >= rows[i][2];
            bool strict = rows[k] != rows[i];
            dominated = geq && strict;
        }
        if (!dominated) reduced.push_back(rows[i]);
    }
    if (reduced.size() > constraint_cap) {
        throw TooLargeError("oracle limited to " + std::to_string(constraint_cap) +
                            " constraints, got " + std::to_string(reduced.size()));
    }

    std::vector<Plane> planes;
    planes.reserve(reduced.size() + 2 * kGroups);
    for (const Row& r : reduced) planes.push_back({r, 1.0});
    for (int i = 0; i < kGroups; ++i) {
        Plane low{}, high{};
        low.n[i] = 1.0;
        low.rhs = 0.0;
        high.n[i] = 1.0;
        high.rhs = p.x_max;
        planes.push_back(low);
        planes.push_back(high);
    }

    bool found = false;
    std::array<double, kGroups> best{};
    const std::size_t n = planes.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                std::array<double, kGroups> x{};
                if (!solve3x3({planes[i], planes[j], planes[k]}, x)) continue;
                if (!is_feasible(p, x, 1e-9)) continue;
                for (int g = 0; g < kGroups; ++g) x[g] = std::clamp(x[g], 0.0, p.x_max);
                if (!found || lex_better(p, x, best)) {
                    best = x;
                    found = true;
                }
            }
        }
    }
    if (!found) {
        best = {0.0, 0.0, 0.0};  // origin vertex, always feasible
    }

    ScalingSolution out;
    out.x = best;
    out.objective = objective_of(p, best);
    return out;
}

}  // namespace cellstress::lp
