#pragma once
// Two-phase simplex over a dense dictionary (rows x nonbasic columns),
// templated on the scalar: double runs with tolerances and partial pricing,
// Rat runs exact. A sparse LU over the final basis upgrades a float solve
// into an exact optimality certificate; large models get exact answers that
// way without ever pivoting a rational tableau of full size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "floc/rational.hpp"

namespace floc {

enum class Rel { Le, Ge, Eq };

struct LpRow {
    std::vector<std::pair<int, Rat>> coef;  // (variable, coefficient)
    Rel rel = Rel::Le;
    Rat rhs;
    std::string name;
};

// Minimize objective . x subject to rows, x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rat> objective;
    std::vector<LpRow> rows;
    std::vector<std::string> var_names;  // optional, used by exports
};

// Equality form A x = b with b >= 0 and x >= 0. Structural variables keep
// their original indices; each inequality row owns one slack (Le) or
// surplus (Ge) column so the map back to the source model is positional.
struct StandardForm {
    int num_structural = 0;
    int total_vars = 0;
    std::vector<Rat> c;     // size total_vars
    std::vector<Rat> b;     // one entry per row, >= 0
    std::vector<Rel> rel;   // after sign normalization
    std::vector<std::vector<std::pair<int, Rat>>> row;  // sparse rows of A
    std::vector<std::vector<std::pair<int, Rat>>> col;  // same entries by column
    std::vector<int> slack_of_row;  // -1 on equality rows
    std::vector<std::string> row_names;
};

inline StandardForm to_standard_form(const LinearProgram& lp) {
    StandardForm sf;
    sf.num_structural = lp.num_vars;
    sf.c.assign(lp.num_vars, Rat(0));
    for (int j = 0; j < (int)lp.objective.size() && j < lp.num_vars; j++)
        sf.c[j] = lp.objective[j];
    int m = (int)lp.rows.size();
    sf.b.resize(m);
    sf.rel.resize(m);
    sf.row.resize(m);
    sf.slack_of_row.assign(m, -1);
    sf.row_names.resize(m);
    int next_col = lp.num_vars;
    for (int i = 0; i < m; i++) {
        const LpRow& r = lp.rows[i];
        bool flip = r.rhs < 0;  // keep every rhs nonnegative
        sf.b[i] = flip ? Rat(-r.rhs) : r.rhs;
        Rel rel = r.rel;
        if (flip && rel == Rel::Le) rel = Rel::Ge;
        else if (flip && rel == Rel::Ge) rel = Rel::Le;
        sf.rel[i] = rel;
        sf.row_names[i] = r.name;
        std::map<int, Rat> acc;  // merge duplicate variable mentions
        for (auto& [j, v] : r.coef) {
            if (j < 0 || j >= lp.num_vars) throw std::invalid_argument("lp: bad var index");
            acc[j] += flip ? Rat(-v) : v;
        }
        for (auto& [j, v] : acc)
            if (v != 0) sf.row[i].push_back({j, v});
        if (rel != Rel::Eq) {
            int s = next_col++;
            sf.slack_of_row[i] = s;
            sf.row[i].push_back({s, rel == Rel::Le ? Rat(1) : Rat(-1)});
        }
    }
    sf.total_vars = next_col;
    sf.c.resize(sf.total_vars, Rat(0));
    sf.col.resize(sf.total_vars);
    for (int i = 0; i < m; i++)
        for (auto& [j, v] : sf.row[i]) sf.col[j].push_back({i, v});
    return sf;
}

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

inline const char* status_name(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        default: return "iteration-limit";
    }
}

struct LpSolution {
    LpStatus status = LpStatus::IterLimit;
    Rat objective;             // meaningful at Optimal
    std::vector<Rat> primal;   // size total_vars
    std::vector<int> basis;    // basic column per row; >= total_vars marks
                               // a parked artificial on a redundant row
    bool exact = false;
    long long iterations = 0;
    double max_residual = 0;   // float path: max |A x - b| over rows
    std::string note;
};

namespace detail {

template <typename T>
constexpr bool lp_is_double = std::is_same_v<T, double>;

template <typename T>
inline T lp_from_rat(const Rat& r) {
    if constexpr (lp_is_double<T>) return rat_to_double(r);
    else return r;
}

// Sparse LU via row maps, Markowitz-flavored pivoting (sparsest row first).
// Factors once, then solves A x = rhs by replaying the elimination ops and
// back-substituting through the stored pivot rows.
template <typename T>
struct SparseLU {
    int n = 0;
    bool singular = false;
    struct Op { int target, src; T factor; };
    std::vector<Op> ops;
    std::vector<int> prow, pcol;
    std::vector<T> pval;
    std::vector<std::map<int, T>> urow;  // pivot rows after elimination

    static bool tiny(const T& v) {
        if constexpr (lp_is_double<T>) return std::fabs(v) < 1e-12;
        else return v == 0;
    }

    void factor(int n_, const std::vector<std::vector<std::pair<int, T>>>& columns) {
        n = n_;
        std::vector<std::map<int, T>> rows(n);
        for (int c = 0; c < n; c++)
            for (auto& [r, v] : columns[c]) {
                T& slot = rows[r][c];
                slot += v;
                if (tiny(slot)) rows[r].erase(c);
            }
        std::vector<std::vector<char>> in_col;  // col -> bitmap of rows
        in_col.assign(n, std::vector<char>(n, 0));
        std::vector<int> colcnt(n, 0);
        for (int r = 0; r < n; r++)
            for (auto& [c, v] : rows[r]) { in_col[c][r] = 1; colcnt[c]++; }
        std::vector<char> row_done(n, 0);
        for (int k = 0; k < n; k++) {
            int br = -1;
            size_t bsz = std::numeric_limits<size_t>::max();
            for (int r = 0; r < n; r++)
                if (!row_done[r] && rows[r].size() < bsz) { bsz = rows[r].size(); br = r; }
            if (br < 0 || bsz == 0) { singular = true; return; }
            // inside the sparsest row: double wants magnitude, Rat wants the
            // thinnest column to limit fill
            int bc = -1;
            if constexpr (lp_is_double<T>) {
                double best = 0;
                for (auto& [c, v] : rows[br])
                    if (std::fabs(v) > best) { best = std::fabs(v); bc = c; }
                if (bc < 0) { singular = true; return; }
            } else {
                int cnt = std::numeric_limits<int>::max();
                for (auto& [c, v] : rows[br])
                    if (colcnt[c] < cnt) { cnt = colcnt[c]; bc = c; }
            }
            T piv = rows[br][bc];
            prow.push_back(br);
            pcol.push_back(bc);
            pval.push_back(piv);
            row_done[br] = 1;
            for (auto& [c, v] : rows[br]) { in_col[c][br] = 0; colcnt[c]--; }
            for (int r = 0; r < n; r++) {
                if (row_done[r] || !in_col[bc][r]) continue;
                T factor = rows[r][bc] / piv;
                ops.push_back({r, br, factor});
                for (auto& [c, v] : rows[br]) {
                    T& slot = rows[r][c];
                    bool existed = in_col[c][r];
                    slot -= factor * v;
                    if (tiny(slot)) {
                        rows[r].erase(c);
                        if (existed) { in_col[c][r] = 0; colcnt[c]--; }
                    } else if (!existed) {
                        in_col[c][r] = 1;
                        colcnt[c]++;
                    }
                }
                // exact arithmetic zeroes the pivot column by construction;
                // floats need the explicit erase
                auto it = rows[r].find(bc);
                if (it != rows[r].end()) { rows[r].erase(it); in_col[bc][r] = 0; colcnt[bc]--; }
            }
        }
        urow.resize(n);
        for (int k = 0; k < n; k++) urow[k] = rows[prow[k]];
    }

    std::vector<T> solve(std::vector<T> rhs) const {
        for (auto& op : ops) rhs[op.target] -= op.factor * rhs[op.src];
        std::vector<T> x(n, T(0));
        for (int k = n - 1; k >= 0; k--) {
            T acc = rhs[prow[k]];
            for (auto& [c, v] : urow[k])
                if (c != pcol[k]) acc -= v * x[c];
            x[pcol[k]] = acc / pval[k];
        }
        return x;
    }
};

}  // namespace detail

// Exact check that a basis proves optimality: primal feasible, dual feasible,
// objectives agree. Basis entries >= total_vars denote the artificial unit
// column of row (id - total_vars) at zero cost; certifying the relaxation
// that includes them still certifies the original model when they sit at 0.
struct BasisCertificate {
    bool ok = false;
    bool primal_ok = false;
    bool dual_ok = false;
    std::string why;
    Rat objective;
    std::vector<Rat> primal;
};

inline BasisCertificate verify_basis_exact(const StandardForm& sf, const std::vector<int>& basis) {
    BasisCertificate cert;
    int m = (int)sf.b.size();
    if ((int)basis.size() != m) { cert.why = "basis size"; return cert; }
    auto column = [&](int id) {
        std::vector<std::pair<int, Rat>> c;
        if (id >= sf.total_vars) c.push_back({id - sf.total_vars, Rat(1)});
        else c = sf.col[id];
        return c;
    };
    auto cost_of = [&](int id) { return id >= sf.total_vars ? Rat(0) : sf.c[id]; };
    std::vector<std::vector<std::pair<int, Rat>>> bcols(m), tcols(m);
    for (int k = 0; k < m; k++) {
        bcols[k] = column(basis[k]);
        for (auto& [r, v] : bcols[k]) tcols[r].push_back({k, v});  // rows of B = cols of B^T
    }
    detail::SparseLU<Rat> lu;
    lu.factor(m, bcols);
    if (lu.singular) { cert.why = "singular basis"; return cert; }
    std::vector<Rat> xb = lu.solve(sf.b);
    cert.primal_ok = true;
    for (int k = 0; k < m; k++)
        if (xb[k] < 0) {
            cert.primal_ok = false;
            cert.why = "primal infeasible";
            break;
        }
    detail::SparseLU<Rat> lut;
    lut.factor(m, tcols);
    if (lut.singular) { cert.why = "singular transpose"; return cert; }
    std::vector<Rat> cb(m);
    for (int k = 0; k < m; k++) cb[k] = cost_of(basis[k]);
    std::vector<Rat> y = lut.solve(cb);
    cert.dual_ok = true;
    for (int j = 0; j < sf.total_vars; j++) {
        Rat acc = sf.c[j];
        for (auto& [r, v] : sf.col[j]) acc -= y[r] * v;
        if (acc < 0) {
            cert.dual_ok = false;
            if (cert.primal_ok) cert.why = "reduced cost on column " + std::to_string(j);
            break;
        }
    }
    if (cert.dual_ok)
        for (int k = 0; k < m; k++)
            if (basis[k] >= sf.total_vars && y[basis[k] - sf.total_vars] > 0) {
                cert.dual_ok = false;
                if (cert.primal_ok) cert.why = "reduced cost on parked artificial";
                break;
            }
    if (!cert.primal_ok || !cert.dual_ok) return cert;
    Rat obj(0), dual(0);
    for (int k = 0; k < m; k++) obj += cb[k] * xb[k];
    for (int i = 0; i < m; i++) dual += sf.b[i] * y[i];
    if (obj != dual) { cert.why = "duality gap"; return cert; }
    cert.ok = true;
    cert.objective = obj;
    cert.primal.assign(sf.total_vars, Rat(0));
    for (int k = 0; k < m; k++)
        if (basis[k] < sf.total_vars) cert.primal[basis[k]] = xb[k];
    return cert;
}

inline Rat standard_residual(const StandardForm& sf, const std::vector<Rat>& x) {
    Rat worst(0);
    for (size_t i = 0; i < sf.row.size(); i++) {
        Rat acc = -sf.b[i];
        for (auto& [j, v] : sf.row[i]) acc += v * x[j];
        if (rat_abs(acc) > worst) worst = rat_abs(acc);
    }
    return worst;
}

struct SolveOptions {
    long long max_iters = 0;        // 0: 50 * (rows + cols)
    std::vector<int> warm_basis;    // complete feasible basis, else ignored
    int stall_factor = 3;           // anti-cycling after stall_factor * rows degenerate pivots
    int refactor_every = 500;       // float drift control; 0 disables
};

namespace detail {

template <typename T>
struct Dict {
    const StandardForm& sf;
    int m, nn = 0;
    long long iters = 0, limit = 0;
    int stall = 0, stall_limit = 0;
    bool scramble = false;              // randomized pivoting, first stall response
    bool bland = false;                 // strict Bland, last-resort termination guarantee
    uint64_t rng = 0x9e3779b97f4a7c15ULL;
    std::vector<int> basis, nonbasic;   // column ids; >= total marks artificials
    std::vector<T> D;                   // m x nn, row-major
    std::vector<T> xb, zbar;
    bool jitter = false;                // stall response: offsets live on the basic values
    T obj{};
    int total, phase = 2;
    int cursor = 0;                     // partial pricing start
    int refactor_every = 0;             // rebuild cadence (double mode only)
    long long last_refactor = 0;
    bool fresh = false;                 // no pivots since the last exact rebuild

    explicit Dict(const StandardForm& s) : sf(s), m((int)s.b.size()), total(s.total_vars) {}

    static bool pos(const T& v) {
        if constexpr (lp_is_double<T>) return v > 1e-9;
        else return v > 0;
    }
    static bool neg(const T& v) {
        if constexpr (lp_is_double<T>) return v < -1e-9;
        else return v < 0;
    }
    T& at(int i, int j) { return D[(size_t)i * nn + j]; }

    bool artificial(int id) const { return id >= total; }

    // xorshift64*, fixed seed: runs stay reproducible
    uint64_t rand64() {
        rng ^= rng >> 12;
        rng ^= rng << 25;
        rng ^= rng >> 27;
        return rng * 0x2545f4914f6cdd1dULL;
    }

    // Random positive offsets on the basic values: min-ratio ties vanish, so
    // pivots on a degenerate vertex complex take real steps instead of
    // orbiting it. Each refactor rebuilds true values and reapplies fresh
    // offsets while the response is live, which keeps the drift bounded by
    // one refactor epoch; the terminal rebuild drops them.
    void shake() {
        if constexpr (lp_is_double<T>) {
            for (int i = 0; i < m; i++) xb[i] += T(1e-7) * (T(1) + T(rand64() % 1024) / T(1024));
            obj = T(0);
            if (phase == 1) {
                for (int i = 0; i < m; i++)
                    if (artificial(basis[i])) obj += xb[i];
            } else {
                for (int i = 0; i < m; i++)
                    if (!artificial(basis[i])) obj += lp_from_rat<T>(sf.c[basis[i]]) * xb[i];
            }
        }
    }

    // cold start: slack/surplus basis where possible, artificials elsewhere
    void init_cold() {
        basis.resize(m);
        std::vector<int> art_rows;
        for (int i = 0; i < m; i++) {
            if (sf.rel[i] == Rel::Le) basis[i] = sf.slack_of_row[i];
            else if (sf.rel[i] == Rel::Ge && sf.b[i] == 0) basis[i] = sf.slack_of_row[i];
            else { basis[i] = total + i; art_rows.push_back(i); }
        }
        std::vector<char> basic(total, 0);
        for (int i = 0; i < m; i++)
            if (basis[i] < total) basic[basis[i]] = 1;
        nonbasic.clear();
        for (int j = 0; j < total; j++)
            if (!basic[j]) nonbasic.push_back(j);
        nn = (int)nonbasic.size();
        std::vector<int> npos(total, -1);
        for (int j = 0; j < nn; j++) npos[nonbasic[j]] = j;
        D.assign((size_t)m * nn, T(0));
        xb.resize(m);
        for (int i = 0; i < m; i++) {
            xb[i] = lp_from_rat<T>(sf.b[i]);
            // rows with a basic slack s: s = b - a.x  ->  D = +a
            // rows with a basic surplus at rhs 0: s = a.x -> D = -a
            // artificial rows: t = b - a.x (+ s)      ->  D = +a, surplus -1
            T sign = (basis[i] < total && sf.rel[i] == Rel::Ge) ? T(-1) : T(1);
            for (auto& [j, v] : sf.row[i]) {
                if (j == basis[i]) continue;
                int p = npos[j];
                if (p >= 0) at(i, p) = sign * lp_from_rat<T>(v);
            }
        }
        phase = art_rows.empty() ? 2 : 1;
        if (phase == 1) {
            zbar.assign(nn, T(0));
            obj = T(0);
            for (int i : art_rows) {
                obj += xb[i];
                for (int j = 0; j < nn; j++) zbar[j] -= at(i, j);
            }
        } else {
            price_phase2();
        }
        fresh = true;
    }

    // warm start from a complete feasible basis; false = caller goes cold.
    // admit_negative installs the basis even when primal infeasible, for a
    // dual walk that restores feasibility afterwards.
    bool init_warm(const std::vector<int>& wb, bool admit_negative = false) {
        if ((int)wb.size() != m) return false;
        std::vector<char> seen(total, 0);
        for (int id : wb) {
            if (id < 0 || id >= total || seen[id]) return false;
            seen[id] = 1;
        }
        std::vector<std::vector<std::pair<int, T>>> bcols(m);
        for (int k = 0; k < m; k++)
            for (auto& [r, v] : sf.col[wb[k]]) bcols[k].push_back({r, lp_from_rat<T>(v)});
        SparseLU<T> lu;
        lu.factor(m, bcols);
        if (lu.singular) return false;
        std::vector<T> rhs(m);
        for (int i = 0; i < m; i++) rhs[i] = lp_from_rat<T>(sf.b[i]);
        std::vector<T> x = lu.solve(rhs);
        if (!admit_negative)
            for (int k = 0; k < m; k++)
                if (neg(x[k])) return false;
        basis = wb;
        nonbasic.clear();
        for (int j = 0; j < total; j++)
            if (!seen[j]) nonbasic.push_back(j);
        nn = (int)nonbasic.size();
        D.assign((size_t)m * nn, T(0));
        xb = x;
        for (int jj = 0; jj < nn; jj++) {
            std::vector<T> col(m, T(0));
            for (auto& [r, v] : sf.col[nonbasic[jj]]) col[r] = lp_from_rat<T>(v);
            std::vector<T> d = lu.solve(col);
            for (int i = 0; i < m; i++)
                if (!SparseLU<T>::tiny(d[i])) at(i, jj) = d[i];
        }
        phase = 2;
        price_phase2();
        fresh = true;
        return true;
    }

    void price_phase1() {
        zbar.assign(nn, T(0));
        obj = T(0);
        for (int i = 0; i < m; i++) {
            if (!artificial(basis[i])) continue;
            obj += xb[i];
            for (int j = 0; j < nn; j++) zbar[j] -= at(i, j);
        }
        for (int j = 0; j < nn; j++)
            if (artificial(nonbasic[j])) zbar[j] += T(1);
        phase = 1;
    }

    // Rebuild D, xb and the pricing from a fresh factorization of the current
    // basis, washing out accumulated float error. False when the factor fails.
    bool refactor() {
        std::vector<std::vector<std::pair<int, T>>> bcols(m);
        for (int k = 0; k < m; k++) {
            if (artificial(basis[k])) bcols[k] = {{basis[k] - total, T(1)}};
            else
                for (auto& [r, v] : sf.col[basis[k]]) bcols[k].push_back({r, lp_from_rat<T>(v)});
        }
        SparseLU<T> lu;
        lu.factor(m, bcols);
        if (lu.singular) return false;
        std::vector<T> rhs(m);
        for (int i = 0; i < m; i++) rhs[i] = lp_from_rat<T>(sf.b[i]);
        xb = lu.solve(rhs);
        if constexpr (lp_is_double<T>)
            for (T& v : xb)
                if (v < 0 && v > -1e-7) v = 0;
        if (jitter) shake();
        std::vector<T> col(m);
        for (int jj = 0; jj < nn; jj++) {
            std::fill(col.begin(), col.end(), T(0));
            if (artificial(nonbasic[jj])) col[nonbasic[jj] - total] = T(1);
            else
                for (auto& [r, v] : sf.col[nonbasic[jj]]) col[r] = lp_from_rat<T>(v);
            std::vector<T> d = lu.solve(col);
            for (int i = 0; i < m; i++) at(i, jj) = SparseLU<T>::tiny(d[i]) ? T(0) : d[i];
        }
        if (phase == 1) price_phase1();
        else price_phase2();
        fresh = true;
        return true;
    }

    void price_phase2() {
        zbar.assign(nn, T(0));
        obj = T(0);
        std::vector<T> cb(m);
        for (int i = 0; i < m; i++) {
            cb[i] = artificial(basis[i]) ? T(0) : lp_from_rat<T>(sf.c[basis[i]]);
            obj += cb[i] * xb[i];
        }
        for (int j = 0; j < nn; j++) {
            T acc = artificial(nonbasic[j]) ? T(0) : lp_from_rat<T>(sf.c[nonbasic[j]]);
            for (int i = 0; i < m; i++)
                if (!SparseLU<T>::tiny(cb[i]) && !SparseLU<T>::tiny(at(i, j))) acc -= cb[i] * at(i, j);
            zbar[j] = acc;
        }
        phase = 2;
    }

    // entering column, or -1 when priced out; artificials never re-enter
    int choose_entering() {
        auto allowed = [&](int j) { return !artificial(nonbasic[j]); };
        if (bland) {
            int best = -1, bestcol = std::numeric_limits<int>::max();
            for (int j = 0; j < nn; j++)
                if (allowed(j) && neg(zbar[j]) && nonbasic[j] < bestcol) { bestcol = nonbasic[j]; best = j; }
            return best;
        }
        if (scramble) {
            // uniform over improving columns; greedy rules can orbit a
            // degenerate plateau for thousands of pivots, a random walk
            // leaves it almost surely and much sooner than Bland
            int pick = -1, seen = 0;
            for (int j = 0; j < nn; j++)
                if (allowed(j) && neg(zbar[j]) && rand64() % (uint64_t)(++seen) == 0) pick = j;
            return pick;
        }
        if constexpr (lp_is_double<T>) {
            int window = std::max(64, nn / 8);
            for (int scanned = 0; scanned < nn; scanned += window) {
                int best = -1;
                T bestz = T(0);
                for (int k = 0; k < window && scanned + k < nn + window; k++) {
                    int j = (cursor + scanned + k) % nn;
                    if (allowed(j) && zbar[j] < bestz) { bestz = zbar[j]; best = j; }
                }
                if (best >= 0 && neg(bestz)) { cursor = (best + 1) % nn; return best; }
            }
            return -1;
        } else {
            int best = -1;
            T bestz = T(0);
            for (int j = 0; j < nn; j++)
                if (allowed(j) && zbar[j] < bestz) { bestz = zbar[j]; best = j; }
            return best;
        }
    }

    // leaving row for entering column je, or -1 (unbounded direction)
    int choose_leaving(int je) {
        if (phase == 2) {
            // flush a parked artificial the moment its row couples
            for (int i = 0; i < m; i++)
                if (artificial(basis[i]) && !SparseLU<T>::tiny(at(i, je))) return i;
        }
        int best = -1, ties = 0;
        T ratio{};
        for (int i = 0; i < m; i++) {
            if (!pos(at(i, je))) continue;
            T r = xb[i] / at(i, je);
            if (r < T(0)) r = T(0);  // float dust below the feasibility floor
            bool better, tie = false;
            if (best < 0) better = true;
            else if (r < ratio) better = true;
            else if (r > ratio) better = false;
            else if (bland) better = basis[i] < basis[best];
            else if (scramble) { tie = true; better = rand64() % (uint64_t)(ties + 1) == 0; }
            else if constexpr (lp_is_double<T>) better = at(i, je) > at(best, je);
            else better = i < best;
            if (tie) ties++;          // reservoir: uniform over min-ratio rows
            else if (better) ties = 1;
            if (better) { best = i; ratio = r; }
        }
        return best;
    }

    void pivot(int r, int je) {
        T p = at(r, je);
        T step = xb[r] / p;
        xb[r] = step;
        for (int j = 0; j < nn; j++) at(r, j) = at(r, j) / p;
        at(r, je) = T(1) / p;
        for (int i = 0; i < m; i++) {
            if (i == r) continue;
            T f = at(i, je);
            if (SparseLU<T>::tiny(f)) { at(i, je) = -f / p; continue; }
            const T* src = &D[(size_t)r * nn];
            T* dst = &D[(size_t)i * nn];
            for (int j = 0; j < nn; j++) dst[j] -= f * src[j];
            dst[je] = -f / p;
            xb[i] -= f * step;
            if constexpr (lp_is_double<T>) {
                if (xb[i] < 0 && xb[i] > -1e-9) xb[i] = 0;
            }
        }
        T ze = zbar[je];
        obj += ze * step;
        if (!SparseLU<T>::tiny(ze)) {
            const T* src = &D[(size_t)r * nn];
            for (int j = 0; j < nn; j++) zbar[j] -= ze * src[j];
        }
        zbar[je] = -ze / p;
        std::swap(basis[r], nonbasic[je]);
        fresh = false;
        bool degenerate;
        if constexpr (lp_is_double<T>) degenerate = step < 1e-12;
        else degenerate = step == 0;
        if (degenerate) {
            ++stall;
            if (stall >= stall_limit) {
                if constexpr (lp_is_double<T>) {
                    if (!jitter) {
                        jitter = true;
                        shake();
                    } else {
                        scramble = true;
                    }
                } else {
                    scramble = true;
                }
            }
            if (stall >= 8 * stall_limit) bland = true;
        } else {
            stall = 0;
            scramble = false;
            bland = false;
        }
    }

    // iterate current phase; returns final status of that phase
    LpStatus run() {
        while (true) {
            if (iters >= limit) return LpStatus::IterLimit;
            if constexpr (lp_is_double<T>) {
                if (refactor_every > 0 && iters - last_refactor >= refactor_every) {
                    refactor();
                    last_refactor = iters;
                }
            }
            int je = choose_entering();
            if (je < 0) {
                // only conclude from freshly rebuilt numbers
                int rb = rebuild_if_stale();
                if (rb == 1) continue;
                if (rb == 2) return LpStatus::IterLimit;  // basis went numerically bad
                return LpStatus::Optimal;
            }
            int r = choose_leaving(je);
            if (r < 0) {
                if (phase == 1) {
                    // the phase-1 objective is bounded below, so an unbounded
                    // ray here is float noise; retire the column
                    if constexpr (!lp_is_double<T>) throw std::logic_error("phase-1 ray");
                    zbar[je] = T(0);
                    continue;
                }
                int rb = rebuild_if_stale();
                if (rb == 1) continue;
                if (rb == 2) return LpStatus::IterLimit;
                return LpStatus::Unbounded;
            }
            iters++;
            pivot(r, je);
        }
    }

    // dual walk from a dual-feasible basis: drive negative basic values out
    // while reduced costs stay nonnegative, so the exit state is optimal.
    // Lowest-index row and minimum dual ratio with lowest-column ties keep
    // the walk finite.
    LpStatus run_dual() {
        while (true) {
            if (iters >= limit) return LpStatus::IterLimit;
            int r = -1;
            for (int i = 0; i < m; i++)
                if (neg(xb[i])) { r = i; break; }
            if (r < 0) return LpStatus::Optimal;
            int je = -1;
            T best{};
            for (int j = 0; j < nn; j++) {
                if (artificial(nonbasic[j])) continue;
                if (!neg(at(r, j))) continue;
                T ratio = zbar[j] / -at(r, j);
                if (je < 0 || ratio < best || (ratio == best && nonbasic[j] < nonbasic[je])) {
                    je = j;
                    best = ratio;
                }
            }
            if (je < 0) return LpStatus::Infeasible;
            iters++;
            pivot(r, je);
        }
    }

    // float mode: one exact rebuild before any terminal conclusion, and the
    // stall offsets, if live, come off first. 0 numbers already clean,
    // 1 rebuilt (re-derive the conclusion), 2 factorization failed.
    int rebuild_if_stale() {
        if constexpr (lp_is_double<T>) {
            if (jitter) {
                jitter = false;
                last_refactor = iters;
                return refactor() ? 1 : 2;
            }
            if (refactor_every > 0 && !fresh) {
                last_refactor = iters;
                return refactor() ? 1 : 2;
            }
        }
        return 0;
    }

    bool phase1_feasible() const {
        if constexpr (lp_is_double<T>) return obj < 1e-7;
        else return obj == 0;
    }
};

}  // namespace detail

enum class LpMode { Float, Rational, Hybrid };

namespace detail {

template <typename T>
inline LpSolution dict_solve(const StandardForm& sf, const SolveOptions& opts) {
    Dict<T> d(sf);
    d.limit = opts.max_iters > 0 ? opts.max_iters : 50LL * ((long long)sf.b.size() + sf.total_vars);
    // capped so huge degenerate models get the stall response early
    d.stall_limit = std::clamp(opts.stall_factor * (int)sf.b.size(), 1, 2000);
    if constexpr (lp_is_double<T>) d.refactor_every = opts.refactor_every;
    bool warm = !opts.warm_basis.empty() && d.init_warm(opts.warm_basis);
    LpSolution out;
    out.exact = !lp_is_double<T>;
    out.note = warm ? "warm" : "cold";
    if (!warm) {
        d.init_cold();
        if (d.phase == 1) {
            LpStatus s = d.run();
            if (s == LpStatus::IterLimit) { out.status = s; out.iterations = d.iters; return out; }
            if (!d.phase1_feasible()) {
                out.status = LpStatus::Infeasible;
                out.iterations = d.iters;
                return out;
            }
            d.price_phase2();
        }
    }
    out.status = d.run();
    out.iterations = d.iters;
    out.basis = d.basis;
    if (out.status != LpStatus::Optimal) return out;
    out.primal.assign(sf.total_vars, Rat(0));
    for (int i = 0; i < d.m; i++)
        if (d.basis[i] < sf.total_vars) out.primal[d.basis[i]] = Rat(d.xb[i]);
    Rat o(0);
    for (int j = 0; j < sf.total_vars; j++)
        if (sf.c[j] != 0 && out.primal[j] != 0) o += sf.c[j] * out.primal[j];
    out.objective = o;
    if constexpr (lp_is_double<T>) {
        out.max_residual = rat_to_double(standard_residual(sf, out.primal));
    }
    return out;
}

// exact dual walk from a dual-feasible float basis whose point sits a hair
// outside the feasible region; much cheaper than an exact primal restart
inline LpSolution dual_repair(const StandardForm& sf, const std::vector<int>& wb,
                              const SolveOptions& opts) {
    Dict<Rat> d(sf);
    d.limit = opts.max_iters > 0 ? opts.max_iters : 50LL * ((long long)sf.b.size() + sf.total_vars);
    d.stall_limit = std::clamp(opts.stall_factor * (int)sf.b.size(), 1, 2000);
    LpSolution out;
    out.exact = true;
    if (!d.init_warm(wb, true)) {
        out.status = LpStatus::IterLimit;  // caller falls back to a full exact solve
        return out;
    }
    out.status = d.run_dual();
    out.iterations = d.iters;
    out.basis = d.basis;
    if (out.status != LpStatus::Optimal) return out;
    out.primal.assign(sf.total_vars, Rat(0));
    for (int i = 0; i < d.m; i++)
        if (d.basis[i] < sf.total_vars) out.primal[d.basis[i]] = d.xb[i];
    Rat o(0);
    for (int j = 0; j < sf.total_vars; j++)
        if (sf.c[j] != 0 && out.primal[j] != 0) o += sf.c[j] * out.primal[j];
    out.objective = o;
    return out;
}

}  // namespace detail

inline LpSolution simplex_solve(const StandardForm& sf, LpMode mode, const SolveOptions& opts = {}) {
    if (mode == LpMode::Float) return detail::dict_solve<double>(sf, opts);
    if (mode == LpMode::Rational) return detail::dict_solve<Rat>(sf, opts);
    // hybrid: float pivots, exact certificate, exact continuation on demand
    LpSolution f = detail::dict_solve<double>(sf, opts);
    if (f.status == LpStatus::Optimal) {
        BasisCertificate cert = verify_basis_exact(sf, f.basis);
        if (cert.ok) {
            LpSolution out;
            out.status = LpStatus::Optimal;
            out.objective = cert.objective;
            out.primal = cert.primal;
            out.basis = f.basis;
            out.exact = true;
            out.iterations = f.iterations;
            out.note = "float+certificate";
            return out;
        }
        if (cert.dual_ok && !cert.primal_ok) {
            LpSolution rep = detail::dual_repair(sf, f.basis, opts);
            if (rep.status == LpStatus::Optimal || rep.status == LpStatus::Infeasible) {
                rep.iterations += f.iterations;
                rep.note = "float+dual repair";
                return rep;
            }
        }
        SolveOptions cont = opts;
        cont.warm_basis.clear();
        for (int id : f.basis) {
            if (id >= sf.total_vars) { cont.warm_basis.clear(); break; }
            cont.warm_basis.push_back(id);
        }
        LpSolution e = detail::dict_solve<Rat>(sf, cont);
        e.iterations += f.iterations;
        e.note = "float+exact continuation (" + cert.why + ")";
        return e;
    }
    // float could not even finish; trust only an exact run
    LpSolution e = detail::dict_solve<Rat>(sf, opts);
    e.note = "exact after float " + std::string(status_name(f.status));
    return e;
}

// Convenience: standardize and solve in one step.
inline LpSolution lp_solve(const LinearProgram& lp, LpMode mode, const SolveOptions& opts = {}) {
    return simplex_solve(to_standard_form(lp), mode, opts);
}

}  // namespace floc
