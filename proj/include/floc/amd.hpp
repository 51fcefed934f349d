#pragma once

#include <chrono>
#include <map>
#include <sstream>

#include "floc/simplex.hpp"
#include "floc/verification.hpp"
#include "floc/warm_start_data.hpp"

namespace floc {

// Search for the best-possible strategyproof randomized rule on a finite
// space, phrased as a linear program: variables p_{a,z} (probability that
// profile a gets the facility at z) plus the approximation bound alpha being
// minimized. Row families: probability (each profile's lottery sums to one),
// incentive (no agent gains by misreporting), approximation (expected social
// cost at most alpha times the optimum).

struct AmdFlags {
    bool peaks_only = false;      // facility restricted to reported locations
    bool antipodal = false;       // circle, even M: locations or their antipodes
    bool fix_first_agent = false;  // circle: canonical profiles with a_1 = 0
    bool anonymity_links = false;  // equality rows across agent permutations
};

// (profile, point) behind each column; (-1, -1) marks alpha.
struct AmdVar {
    int profile = -1;
    int point = -1;
};

struct LpModel {
    MetricSpace space;
    int n = 3;
    AmdFlags flags;
    LinearProgram lp;
    int alpha_var = -1;
    std::vector<AmdVar> var_meta;
    std::vector<Profile> profiles;         // canonical enumeration order
    std::vector<Rat> opt;                  // OPT per canonical profile
    std::vector<std::vector<int>> var_of;  // [profile][z] -> column, -1 if absent
    int prob_rows = 0, ic_rows = 0, apx_rows = 0, link_rows = 0;
};

namespace detail {

// canonical index of a profile that is already in the model's enumeration
inline int canonical_index(const LpModel& mod, const Profile& a) {
    int m = mod.space.size();
    if (mod.flags.fix_first_agent) return a[1] * m + a[2];
    return (int)profile_rank(a, m);
}

inline std::string profile_tag(const Profile& a) {
    std::string t;
    for (size_t i = 0; i < a.size(); i++) t += (i ? "_" : "") + std::to_string(a[i]);
    return t;
}

inline void add_model_row(LpModel& mod, const std::map<int, Rat>& coefs, Rel rel, const Rat& rhs,
                          std::string name) {
    LpRow row;
    row.rel = rel;
    row.rhs = rhs;
    row.name = std::move(name);
    for (auto& [j, v] : coefs)
        if (v != 0) row.coef.push_back({j, v});
    mod.lp.rows.push_back(std::move(row));
}

}  // namespace detail

inline LpModel build_lp(const MetricSpace& s, int n, AmdFlags flags) {
    if (n != 3) throw std::invalid_argument("amd: the program covers exactly three agents");
    if (s.size() < 2) throw std::invalid_argument("amd: need at least two locations");
    bool circle = s.kind() == SpaceKind::Circle;
    if (flags.antipodal && (!circle || s.circle_size() % 2 != 0))
        throw std::invalid_argument("amd: antipodal restriction needs an even circle");
    if (flags.fix_first_agent && !circle)
        throw std::invalid_argument("amd: fix_first_agent needs a circle");

    LpModel mod;
    mod.space = s;
    mod.n = n;
    mod.flags = flags;
    int m = s.size();

    if (flags.fix_first_agent) {
        for (int a2 = 0; a2 < m; a2++)
            for (int a3 = 0; a3 < m; a3++) mod.profiles.push_back({0, a2, a3});
    } else {
        long long total = profile_count(m, n);
        for (long long r = 0; r < total; r++) mod.profiles.push_back(profile_at(r, m, n));
    }
    int np = (int)mod.profiles.size();

    auto allowed_points = [&](const Profile& a) {
        std::vector<int> zs;
        if (!flags.peaks_only && !flags.antipodal) {
            zs.resize(m);
            for (int z = 0; z < m; z++) zs[z] = z;
            return zs;
        }
        std::vector<char> in(m, 0);
        for (int x : a) in[x] = 1;
        if (flags.antipodal && !flags.peaks_only)
            for (int x : a) in[s.antipode(x)] = 1;
        for (int z = 0; z < m; z++)
            if (in[z]) zs.push_back(z);
        return zs;
    };

    mod.var_of.assign(np, std::vector<int>(m, -1));
    mod.opt.resize(np);
    for (int p = 0; p < np; p++) {
        const Profile& a = mod.profiles[p];
        mod.opt[p] = opt_cost(s, a).cost;
        for (int z : allowed_points(a)) {
            mod.var_of[p][z] = (int)mod.var_meta.size();
            mod.var_meta.push_back({p, z});
            mod.lp.var_names.push_back("p_" + detail::profile_tag(a) + "_z" + std::to_string(z));
        }
    }
    mod.alpha_var = (int)mod.var_meta.size();
    mod.var_meta.push_back({-1, -1});
    mod.lp.var_names.push_back("alpha");
    mod.lp.num_vars = mod.alpha_var + 1;
    mod.lp.objective.assign(mod.lp.num_vars, Rat(0));
    mod.lp.objective[mod.alpha_var] = 1;

    for (int p = 0; p < np; p++) {
        std::map<int, Rat> coefs;
        for (int z = 0; z < m; z++)
            if (mod.var_of[p][z] >= 0) coefs[mod.var_of[p][z]] = 1;
        detail::add_model_row(mod, coefs, Rel::Eq, Rat(1),
                              "prob_" + detail::profile_tag(mod.profiles[p]));
        mod.prob_rows++;
    }

    for (int p = 0; p < np; p++) {
        const Profile& a = mod.profiles[p];
        for (int i = 0; i < n; i++) {
            for (int r = 0; r < m; r++) {
                Profile dev = a;
                dev[i] = r;
                // with a fixed first agent the deviated profile is rotated
                // back to canonical form; reported points shift with it
                int shift = 0;
                if (flags.fix_first_agent && dev[0] != 0) {
                    shift = dev[0];
                    for (int& x : dev) x = (x - shift + m) % m;
                }
                int q = detail::canonical_index(mod, dev);
                std::map<int, Rat> coefs;
                for (int z = 0; z < m; z++)
                    if (mod.var_of[p][z] >= 0) coefs[mod.var_of[p][z]] += s.dist(z, a[i]);
                for (int w = 0; w < m; w++)
                    if (mod.var_of[q][w] >= 0) coefs[mod.var_of[q][w]] -= s.dist((w + shift) % m, a[i]);
                detail::add_model_row(mod, coefs, Rel::Le, Rat(0),
                                      "ic_" + detail::profile_tag(a) + "_a" + std::to_string(i) +
                                          "_r" + std::to_string(r));
                mod.ic_rows++;
            }
        }
    }

    for (int p = 0; p < np; p++) {
        const Profile& a = mod.profiles[p];
        std::map<int, Rat> coefs;
        for (int z = 0; z < m; z++)
            if (mod.var_of[p][z] >= 0) coefs[mod.var_of[p][z]] = social_cost_at(s, a, z);
        coefs[mod.alpha_var] = -mod.opt[p];
        detail::add_model_row(mod, coefs, Rel::Le, Rat(0),
                              "apx_" + detail::profile_tag(a));
        mod.apx_rows++;
    }

    if (flags.anonymity_links) {
        // the two adjacent transpositions generate all agent permutations
        const int perms[2][3] = {{1, 0, 2}, {0, 2, 1}};
        for (int p = 0; p < np; p++) {
            const Profile& a = mod.profiles[p];
            for (auto& perm : perms) {
                Profile sa = {a[perm[0]], a[perm[1]], a[perm[2]]};
                int shift = 0;
                if (flags.fix_first_agent && sa[0] != 0) {
                    shift = sa[0];
                    for (int& x : sa) x = (x - shift + m) % m;
                }
                int q = detail::canonical_index(mod, sa);
                if (q < p) continue;  // the mirror row comes from the other side
                if (q == p && shift == 0) continue;
                for (int z = 0; z < m; z++) {
                    if (mod.var_of[p][z] < 0) continue;
                    int w = (z - shift + m) % m;
                    std::map<int, Rat> coefs;
                    coefs[mod.var_of[p][z]] += 1;
                    coefs[mod.var_of[q][w]] -= 1;
                    if (coefs.empty() || (coefs.size() == 1 && mod.var_of[p][z] == mod.var_of[q][w]))
                        continue;
                    detail::add_model_row(mod, coefs, Rel::Eq, Rat(0),
                                          "link_" + detail::profile_tag(a) + "_z" +
                                              std::to_string(z) + "_p" +
                                              std::to_string(&perm - perms));
                    mod.link_rows++;
                }
            }
        }
    }
    return mod;
}

// Max constraint violation of the model at a full assignment (alpha included).
inline Rat model_residual(const LpModel& mod, const std::vector<Rat>& x) {
    if ((int)x.size() != mod.lp.num_vars)
        throw std::invalid_argument("model_residual: assignment size mismatch");
    Rat worst(0);
    for (const LpRow& row : mod.lp.rows) {
        Rat lhs(0);
        for (auto& [j, v] : row.coef) lhs += v * x[j];
        Rat viol(0);
        if (row.rel == Rel::Le) viol = lhs - row.rhs;
        else if (row.rel == Rel::Ge) viol = row.rhs - lhs;
        else viol = rat_abs(lhs - row.rhs);
        if (viol > worst) worst = viol;
    }
    return worst;
}

// Assignment induced by a concrete rule: p_{a,z} = Pr[rule(a) = z], plus the
// given alpha. Throws when the rule puts mass on a point the model excluded.
inline std::vector<Rat> assignment_from_mechanism(const LpModel& mod, const Mechanism& f,
                                                  const Rat& alpha) {
    std::vector<Rat> x(mod.lp.num_vars, Rat(0));
    for (size_t p = 0; p < mod.profiles.size(); p++) {
        Lottery L = f(mod.space, mod.profiles[p]);
        for (auto& [z, pr] : L.mass) {
            int j = mod.var_of[p][z];
            if (j < 0) throw std::invalid_argument("assignment_from_mechanism: mass on excluded point");
            x[j] = pr;
        }
    }
    x[mod.alpha_var] = alpha;
    return x;
}

// Feasible starting basis from the agent-1 dictatorship: the facility sits on
// the first report, alpha covers the worst dictator ratio. One basic column
// per row: the profile's p_{a,a_1} in its probability row, slacks in the
// incentive rows, slacks in the approximation rows except the binding one,
// which holds alpha.
inline std::vector<int> dictator_warm_basis(const LpModel& mod, const StandardForm& sf) {
    if (mod.flags.anonymity_links)
        throw std::invalid_argument("dictator_warm_basis: dictatorship breaks anonymity rows");
    int np = (int)mod.profiles.size();
    int binding = -1;
    Rat best(0);
    for (int p = 0; p < np; p++) {
        if (mod.opt[p] == 0) continue;
        Rat ratio = social_cost_at(mod.space, mod.profiles[p], mod.profiles[p][0]) / mod.opt[p];
        if (binding < 0 || ratio > best) {
            best = ratio;
            binding = p;
        }
    }
    std::vector<int> basis;
    basis.reserve(sf.b.size());
    for (int p = 0; p < np; p++) basis.push_back(mod.var_of[p][mod.profiles[p][0]]);
    for (int r = np; r < (int)sf.b.size(); r++) {
        bool is_binding_apx = r == np + mod.ic_rows + binding;
        basis.push_back(is_binding_apx ? mod.alpha_var : sf.slack_of_row[r]);
    }
    return basis;
}

enum class AmdMode { Rational, Float };

struct SolvedMechanism {
    Rat alpha;
    std::vector<Lottery> table;  // full m^n table, profile-rank indexed
    MetricSpace space;
    int n = 3;
    int lp_vars = 0, lp_rows = 0;  // solved model size
    bool exact = false;
    Rat max_row_violation;       // residual of the model at the solution
    bool validated = false;      // exact re-check ran (rational mode)
    long long sp_violations = 0;
    std::optional<SpViolation> sp_witness;
    Rat table_worst_ratio;
    LpSolution lp;
    double seconds = 0;

    Mechanism as_mechanism(std::string name = "amd-optimal") const {
        int m = space.size();
        return Mechanism{std::move(name), "solved to be strategyproof; re-verified exhaustively",
                         [table = table, m, n = n](const MetricSpace& s2, const Profile& a) {
                             if (s2.size() != m || (int)a.size() != n)
                                 throw std::invalid_argument("amd table: wrong space or profile size");
                             return table[profile_rank(a, m)];
                         }};
    }
};

// Bundled starting basis for the model instances whose default start is
// impractically degenerate. A hint only: the exact certificate judges the
// result like any other solve, and a stale hint just fails to install.
inline std::vector<int> stored_warm_basis(const MetricSpace& s, int n, const AmdFlags& flags) {
    if (s.kind() == SpaceKind::Circle && s.circle_size() == 11 && n == 3 &&
        flags.fix_first_agent && !flags.peaks_only && !flags.antipodal && !flags.anonymity_links)
        return detail::circle11_start_basis();
    return {};
}

inline SolvedMechanism solve_optimal_mechanism(const MetricSpace& s, int n, AmdFlags flags,
                                               AmdMode mode, SolveOptions opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    LpModel mod = build_lp(s, n, flags);
    StandardForm sf = to_standard_form(mod.lp);
    if (opts.warm_basis.empty()) opts.warm_basis = stored_warm_basis(s, n, flags);
    if (opts.warm_basis.empty() && !flags.anonymity_links)
        opts.warm_basis = dictator_warm_basis(mod, sf);
    LpSolution sol =
        simplex_solve(sf, mode == AmdMode::Float ? LpMode::Float : LpMode::Hybrid, opts);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error(std::string("amd: solver stopped with status ") +
                                 status_name(sol.status));

    SolvedMechanism out;
    out.space = s;
    out.n = n;
    out.lp_vars = mod.lp.num_vars;
    out.lp_rows = (int)mod.lp.rows.size();
    out.alpha = sol.primal[mod.alpha_var];
    out.exact = sol.exact;

    int m = s.size();
    long long total = profile_count(m, n);
    out.table.resize(total);
    for (long long r = 0; r < total; r++) {
        Profile a = profile_at(r, m, n);
        int shift = flags.fix_first_agent ? a[0] : 0;
        Profile b = a;
        if (shift) for (int& x : b) x = (x - shift + m) % m;
        int q = detail::canonical_index(mod, b);
        Lottery L;
        for (int w = 0; w < m; w++) {
            int j = mod.var_of[q][w];
            if (j >= 0 && sol.primal[j] != 0) L.add((w + shift) % m, sol.primal[j]);
        }
        out.table[r] = std::move(L);
    }

    std::vector<Rat> x(sol.primal.begin(), sol.primal.begin() + mod.lp.num_vars);
    out.max_row_violation = model_residual(mod, x);

    if (mode == AmdMode::Rational) {
        // the solved table must be strategyproof and attain exactly alpha
        Mechanism g = out.as_mechanism();
        out.sp_witness = check_strategyproof(s, g, n);
        out.sp_violations = out.sp_witness ? 1 : 0;
        out.table_worst_ratio = worst_ratio(s, g, n).ratio;
        out.validated = true;
    }
    out.lp = std::move(sol);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

enum class LpFormat { Mps, LpText };

namespace detail {

inline std::string num17(const Rat& v) {
    std::ostringstream os;
    os.precision(17);
    os << rat_to_double(v);
    return os.str();
}

}  // namespace detail

// Serialize the model. Column names encode (profile, point): p_<a1>_<a2>_<a3>_z<z>,
// plus alpha. MPS output is free-format (whitespace separated, one coefficient
// per COLUMNS line, objective row COST, rhs vector RHS1); coefficients print
// with 17 significant digits, so a parse-back reproduces the model to double
// precision.
inline std::string export_lp(const LpModel& mod, LpFormat fmt) {
    const LinearProgram& lp = mod.lp;
    std::ostringstream os;
    if (fmt == LpFormat::Mps) {
        os << "* facility-location mechanism design model\n";
        os << "* space m=" << mod.space.size() << " profiles=" << mod.profiles.size()
           << " flags: peaks_only=" << mod.flags.peaks_only << " antipodal=" << mod.flags.antipodal
           << " fix_first_agent=" << mod.flags.fix_first_agent
           << " anonymity_links=" << mod.flags.anonymity_links << "\n";
        os << "NAME AMD\nROWS\n N COST\n";
        for (const LpRow& row : lp.rows)
            os << " " << (row.rel == Rel::Le ? 'L' : row.rel == Rel::Ge ? 'G' : 'E') << " "
               << row.name << "\n";
        os << "COLUMNS\n";
        // column-major: gather each variable's row entries
        std::vector<std::vector<std::pair<const std::string*, const Rat*>>> cols(lp.num_vars);
        for (const LpRow& row : lp.rows)
            for (auto& [j, v] : row.coef) cols[j].push_back({&row.name, &v});
        for (int j = 0; j < lp.num_vars; j++) {
            if (lp.objective[j] != 0)
                os << " " << lp.var_names[j] << " COST " << detail::num17(lp.objective[j]) << "\n";
            for (auto& [name, v] : cols[j])
                os << " " << lp.var_names[j] << " " << *name << " " << detail::num17(*v) << "\n";
        }
        os << "RHS\n";
        for (const LpRow& row : lp.rows)
            if (row.rhs != 0) os << " RHS1 " << row.name << " " << detail::num17(row.rhs) << "\n";
        os << "ENDATA\n";
        return os.str();
    }
    os << "\\ facility-location mechanism design model\n";
    os << "Minimize\n obj: alpha\nSubject To\n";
    for (const LpRow& row : lp.rows) {
        os << " " << row.name << ":";
        if (row.coef.empty()) os << " 0 " << lp.var_names[0];
        for (auto& [j, v] : row.coef)
            os << (v < 0 ? " - " : " + ") << detail::num17(rat_abs(v)) << " " << lp.var_names[j];
        os << (row.rel == Rel::Le ? " <= " : row.rel == Rel::Ge ? " >= " : " = ")
           << detail::num17(row.rhs) << "\n";
    }
    os << "Bounds\nEnd\n";
    return os.str();
}

struct SweepRow {
    int M = 0;
    Rat alpha;
    Rat alpha_peaks_only;
    int lp_vars = 0, lp_rows = 0;  // unrestricted model size
    double seconds = 0;
};

// Per-M optimal approximation bounds on discrete circles. Both columns use the
// fixed-first-agent canonicalization (sound: averaging any feasible table over
// rotations preserves every row and the objective), which is what keeps the
// larger M within desk budget.
inline std::vector<SweepRow> amd_sweep(int lo, int hi, AmdMode mode = AmdMode::Rational) {
    if (lo < 3 || hi < lo) throw std::invalid_argument("amd_sweep: need 3 <= lo <= hi");
    std::vector<SweepRow> rows;
    for (int M = lo; M <= hi; M++) {
        auto t0 = std::chrono::steady_clock::now();
        MetricSpace s = make_circle(M);
        AmdFlags unrestricted;
        unrestricted.fix_first_agent = true;
        AmdFlags peaks = unrestricted;
        peaks.peaks_only = true;
        SweepRow row;
        row.M = M;
        SolvedMechanism full = solve_optimal_mechanism(s, 3, unrestricted, mode);
        row.alpha = full.alpha;
        row.lp_vars = full.lp_vars;
        row.lp_rows = full.lp_rows;
        row.alpha_peaks_only = solve_optimal_mechanism(s, 3, peaks, mode).alpha;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "M,alpha,alpha_peaks_only,wall_time_s\n";
    os.precision(12);
    for (const SweepRow& r : rows)
        os << r.M << "," << rat_to_double(r.alpha) << "," << rat_to_double(r.alpha_peaks_only)
           << "," << r.seconds << "\n";
    return os.str();
}

}  // namespace floc
