#pragma once

#include <cmath>
#include <optional>
#include <thread>

#include "floc/mechanisms.hpp"

namespace floc {

struct SpViolation {
    Profile profile;
    int agent = 0;
    int deviation = 0;
    Rat truthful_cost;
    Rat deviating_cost;
    Rat gain() const { return truthful_cost - deviating_cost; }
};

struct RatioReport {
    Rat ratio;               // max over profiles of SC/OPT (1 when SC = OPT = 0)
    bool unbounded = false;  // some profile had OPT = 0 but SC > 0
    Profile witness;
    Rat witness_sc;
    Rat witness_opt;
};

struct DominanceReport {
    bool dominates = false;            // SC(f) <= SC(g) everywhere, strict somewhere
    std::optional<Profile> strict_witness;
    std::optional<Profile> counterexample;  // profile with SC(f) > SC(g)
    Rat f_sc, g_sc;                         // costs at the reported profile
};

namespace detail {

inline void check_budget(int m, int n) {
    double work = std::pow((double)m, n + 1) * n;
    if (work > 1e8)
        throw std::runtime_error("exhaustive check too large: m^(n+1)*n exceeds 1e8");
}

// Full mechanism table over all m^n profiles, profile-rank indexed.
// Chunked across threads; the table is identical for any worker count.
inline std::vector<Lottery> full_table(const MetricSpace& s, const Mechanism& f, int n,
                                       int jobs = 1) {
    long long total = profile_count(s.size(), n);
    std::vector<Lottery> table(total);
    auto work = [&](long long lo, long long hi) {
        for (long long r = lo; r < hi; r++) table[r] = f(s, profile_at(r, s.size(), n));
    };
    if (jobs <= 1) {
        work(0, total);
    } else {
        std::vector<std::thread> ts;
        long long chunk = (total + jobs - 1) / jobs;
        for (int j = 0; j < jobs; j++)
            ts.emplace_back(work, j * chunk, std::min(total, (j + 1) * chunk));
        for (auto& t : ts) t.join();
    }
    return table;
}

}  // namespace detail

// Exhaustive strategyproofness check over all profiles, agents and deviations,
// in lexicographic order; returns the first strict violation if any.
inline std::optional<SpViolation> check_strategyproof(const MetricSpace& s, const Mechanism& f,
                                                      int n, int jobs = 1) {
    detail::check_budget(s.size(), n);
    int m = s.size();
    std::vector<Lottery> table = detail::full_table(s, f, n, jobs);
    long long total = profile_count(m, n);
    for (long long r = 0; r < total; r++) {
        Profile a = profile_at(r, m, n);
        for (int i = 0; i < n; i++) {
            Rat truthful = agent_cost(s, a, i, table[r]);
            Profile b = a;
            for (int d = 0; d < m; d++) {
                if (d == a[i]) continue;
                b[i] = d;
                Rat dev = agent_cost(s, a, i, table[profile_rank(b, m)]);
                if (dev < truthful) return SpViolation{a, i, d, truthful, dev};
            }
        }
    }
    return std::nullopt;
}

// Best strict gain available to one agent at one profile, or nullopt.
inline std::optional<SpViolation> find_manipulation(const MetricSpace& s, const Mechanism& f,
                                                    const Profile& a, int agent) {
    Rat truthful = agent_cost(s, a, agent, f(s, a));
    std::optional<SpViolation> best;
    Profile b = a;
    for (int d = 0; d < s.size(); d++) {
        if (d == a[agent]) continue;
        b[agent] = d;
        Rat dev = agent_cost(s, a, agent, f(s, b));
        if (dev < truthful && (!best || dev < best->deviating_cost))
            best = SpViolation{a, agent, d, truthful, dev};
    }
    return best;
}

// Max over all profiles of SC(f(a)) / OPT(a). Profiles with OPT = 0 count as
// ratio 1 when SC = 0 and flag the report unbounded otherwise.
inline RatioReport worst_ratio(const MetricSpace& s, const Mechanism& f, int n, int jobs = 1) {
    detail::check_budget(s.size(), n);
    int m = s.size();
    std::vector<Lottery> table = detail::full_table(s, f, n, jobs);
    long long total = profile_count(m, n);
    RatioReport rep;
    rep.ratio = Rat(1);
    rep.witness = profile_at(0, m, n);
    rep.witness_sc = social_cost(s, rep.witness, table[0]);
    rep.witness_opt = opt_cost(s, rep.witness).cost;
    for (long long r = 0; r < total; r++) {
        Profile a = profile_at(r, m, n);
        Rat sc = social_cost(s, a, table[r]);
        Rat opt = opt_cost(s, a).cost;
        if (opt == 0) {
            if (sc > 0) {
                // unbounded: keep the first such profile as the witness
                rep.unbounded = true;
                rep.witness = a;
                rep.witness_sc = sc;
                rep.witness_opt = opt;
                break;
            }
            continue;
        }
        Rat ratio = sc / opt;
        if (ratio > rep.ratio) {
            rep.ratio = ratio;
            rep.witness = a;
            rep.witness_sc = sc;
            rep.witness_opt = opt;
        }
    }
    return rep;
}

// Does f's social cost weakly beat g's on every profile, strictly somewhere?
inline DominanceReport check_dominates(const MetricSpace& s, const Mechanism& f,
                                       const Mechanism& g, int n, int jobs = 1) {
    detail::check_budget(s.size(), n);
    int m = s.size();
    std::vector<Lottery> tf = detail::full_table(s, f, n, jobs);
    std::vector<Lottery> tg = detail::full_table(s, g, n, jobs);
    long long total = profile_count(m, n);
    DominanceReport rep;
    for (long long r = 0; r < total; r++) {
        Profile a = profile_at(r, m, n);
        Rat cf = social_cost(s, a, tf[r]);
        Rat cg = social_cost(s, a, tg[r]);
        if (cf > cg) {
            rep.dominates = false;
            rep.counterexample = a;
            rep.f_sc = cf;
            rep.g_sc = cg;
            return rep;
        }
        if (cf < cg && !rep.strict_witness) {
            rep.strict_witness = a;
            rep.f_sc = cf;
            rep.g_sc = cg;
        }
    }
    rep.dominates = rep.strict_witness.has_value();
    return rep;
}

// Worst-case ratio of the 1/4-clamped quadratic rule on the symmetric circle
// instance with arcs (x, x, 1-2x), as an exact function of x in (0, 1/3].
inline Rat qcd_family_ratio(const Rat& x) {
    if (x <= 0 || x > Rat(1, 3))
        throw std::invalid_argument("qcd_family_ratio: x must lie in (0, 1/3]");
    if (x >= Rat(1, 4))
        return (Rat(1) - 3 * x + 3 * x * x) / (Rat(1) - 4 * x + 6 * x * x);
    Rat t = (Rat(1) - 2 * x) * (Rat(1) - 2 * x);
    return (Rat(3, 16) + t) / (Rat(2, 16) + t);
}

// Three-cluster circle instance that pushes the facing-arc rule toward ratio 2:
// k agents at position 0, k agents at arc x = 1/(4*sqrt(k)), one agent across.
struct PcdFamilyPoint {
    long long k = 0;
    long long n = 0;        // 2k + 1
    double x = 0;           // arc between the two k-agent clusters
    double sc = 0;          // expected social cost of the facing-arc rule
    double opt = 0;         // social cost at the middle cluster
    double ratio = 0;
    double lower_bound = 0; // (sqrt(k)/2) / (sqrt(k)/4 + 1/2)
    double positions[3] = {0, 0, 0};
    long long counts[3] = {0, 0, 0};
};

inline PcdFamilyPoint pcd_bad_family(long long k) {
    if (k < 1) throw std::invalid_argument("pcd_bad_family: k >= 1");
    PcdFamilyPoint p;
    p.k = k;
    p.n = 2 * k + 1;
    double rk = std::sqrt((double)k);
    p.x = 1.0 / (4.0 * rk);
    p.sc = -2.0 * k * p.x * p.x + (2.0 * k - 1) * p.x + 0.5;
    p.opt = k * p.x + 0.5 - p.x;
    p.ratio = p.sc / p.opt;
    p.lower_bound = (rk / 2.0) / (rk / 4.0 + 0.5);
    p.positions[0] = 0.0;
    p.positions[1] = p.x;
    p.positions[2] = 0.5;
    p.counts[0] = k;
    p.counts[1] = k;
    p.counts[2] = 1;
    return p;
}

}  // namespace floc
