#pragma once

#include <functional>
#include <memory>
#include <string>

#include "floc/profile.hpp"

namespace floc {

// A randomized facility-location rule: profile -> lottery over vertices.
// eval throws std::invalid_argument when the space/profile is outside the
// rule's domain. sp_note records what is known about strategyproofness.
struct Mechanism {
    std::string name;
    std::string sp_note;
    std::function<Lottery(const MetricSpace&, const Profile&)> eval;

    Lottery operator()(const MetricSpace& s, const Profile& a) const { return eval(s, a); }
};

namespace detail {
inline void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}
}  // namespace detail

// Uniformly random dictator: facility on a reported location chosen uniformly.
inline Lottery rd_lottery(const MetricSpace&, const Profile& a) {
    detail::require(!a.empty(), "rd: empty profile");
    Lottery f;
    int n = (int)a.size();
    for (int x : a) f.add(x, Rat(1, n));
    return f;
}

// Each agent's location is chosen with probability equal to the arc facing it.
inline Lottery pcd_lottery(const MetricSpace& s, const Profile& a) {
    detail::require(s.kind() == SpaceKind::Circle, "pcd: requires a circle");
    detail::require(a.size() >= 2, "pcd: requires n >= 2");
    ArcLengths arcs = arc_lengths(s, a);
    Lottery f;
    for (size_t i = 0; i < a.size(); i++) f.add(a[i], arcs.facing[i]);
    return f;
}

// Facing arcs squared, clamped below by q^2, then normalized. n = 3 only.
inline Lottery qcd_lottery(const MetricSpace& s, const Profile& a, const Rat& q) {
    detail::require(s.kind() == SpaceKind::Circle, "qcd: requires a circle");
    detail::require(a.size() == 3, "qcd: requires n = 3");
    detail::require(q >= 0 && q <= Rat(1, 2), "qcd: q must lie in [0, 1/2]");
    ArcLengths arcs = arc_lengths(s, a);
    Rat q2 = q * q;
    std::vector<Rat> w(3);
    Rat total(0);
    for (int i = 0; i < 3; i++) {
        Rat sq = arcs.facing[i] * arcs.facing[i];
        w[i] = sq > q2 ? sq : q2;
        total += w[i];
    }
    Lottery f;
    for (int i = 0; i < 3; i++) f.add(a[i], w[i] / total);
    return f;
}

// n = 3, any metric space: agent i's location weighted by the distance
// between the other two reports.
inline Lottery pd_lottery(const MetricSpace& s, const Profile& a) {
    detail::require(a.size() == 3, "pd: requires n = 3");
    Rat w0 = s.dist(a[1], a[2]), w1 = s.dist(a[0], a[2]), w2 = s.dist(a[0], a[1]);
    Rat total = w0 + w1 + w2;
    if (total == 0) return Lottery::point(a[0]);  // all reports coincide
    Lottery f;
    f.add(a[0], w0 / total);
    f.add(a[1], w1 / total);
    f.add(a[2], w2 / total);
    return f;
}

// Any n: weight_i = D - sum_j d(a_i, a_j) with D the total over all pairs.
// Weights are sums of distances not involving i, hence nonnegative.
inline Lottery pd_general_lottery(const MetricSpace& s, const Profile& a) {
    int n = (int)a.size();
    detail::require(n >= 1, "pd-general: empty profile");
    std::vector<Rat> rowsum(n, Rat(0));
    Rat D(0);
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) {
            const Rat& d = s.dist(a[i], a[j]);
            rowsum[i] += d;
            rowsum[j] += d;
            D += d;
        }
    Rat total = Rat(n - 2) * D;
    if (total <= 0) {  // n <= 2 or all coincident: uniform over reports
        Lottery f;
        for (int x : a) f.add(x, Rat(1, n));
        return f;
    }
    Lottery f;
    for (int i = 0; i < n; i++) f.add(a[i], (D - rowsum[i]) / total);
    return f;
}

// Lower median of 1-D rational positions.
inline Rat median_line(std::vector<Rat> xs) {
    detail::require(!xs.empty(), "median_line: empty input");
    std::sort(xs.begin(), xs.end());
    return xs[(xs.size() - 1) / 2];
}

inline Mechanism rd() {
    return {"rd", "strategyproof in any metric space", rd_lottery};
}

inline Mechanism pcd() {
    return {"pcd", "strategyproof on circles for odd n; even n unverified",
            pcd_lottery};
}

inline Mechanism qcd(const Rat& q) {
    return {"qcd:q=" + rat_str(q),
            "not strategyproof: exhaustive search finds deviations for every q tried, "
            "q = 1/4 included (clean on C_4 only, where arcs quantize to clamp width)",
            [q](const MetricSpace& s, const Profile& a) { return qcd_lottery(s, a, q); }};
}

inline Mechanism pd() {
    return {"pd", "strategyproof in any metric space (n = 3)", pd_lottery};
}

inline Mechanism pd_general() {
    return {"pd-general", "strategyproof in any metric space", pd_general_lottery};
}

// Vertex indices read as positions along a line; lower-median vertex wins.
inline Mechanism median_mechanism() {
    return {"median", "strategyproof on line topologies",
            [](const MetricSpace& s, const Profile& a) {
                detail::require(s.kind() == SpaceKind::Graph,
                                "median: requires a line (path) graph");
                std::vector<int> xs(a);
                std::sort(xs.begin(), xs.end());
                return Lottery::point(xs[(xs.size() - 1) / 2]);
            }};
}

// Moves probability mass off peaks/antipodes onto the two nearest such points,
// split so that every agent's expected cost is unchanged. Even circles only.
inline Mechanism antipodal_split(Mechanism inner) {
    auto base = std::make_shared<Mechanism>(std::move(inner));
    Mechanism out;
    out.name = "antipodal_split(" + base->name + ")";
    out.sp_note = "preserves agent costs and strategyproofness of the inner rule";
    out.eval = [base](const MetricSpace& s, const Profile& a) {
        detail::require(s.kind() == SpaceKind::Circle && s.circle_size() % 2 == 0,
                        "antipodal_split: requires an even circle");
        int M = s.circle_size();
        std::vector<bool> anchor(M, false);
        for (int x : a) {
            anchor[x] = true;
            anchor[s.antipode(x)] = true;
        }
        Lottery f = (*base)(s, a);
        Lottery out_f;
        for (auto& [v, p] : f.mass) {
            if (anchor[v]) {
                out_f.add(v, p);
                continue;
            }
            int cw = v, ccw = v, x = 0, y = 0;
            while (!anchor[cw]) { cw = (cw + 1) % M; x++; }
            while (!anchor[ccw]) { ccw = (ccw - 1 + M) % M; y++; }
            out_f.add(cw, p * Rat(y, x + y));
            out_f.add(ccw, p * Rat(x, x + y));
        }
        return out_f;
    };
    return out;
}

namespace detail {
// Circle isometries: k < M is rotation by k, k >= M is reflection v -> (k - v).
inline int apply_isometry(int g, int M, int v) {
    return g < M ? (v + g) % M : ((g - M) - v % M + 2 * M) % M;
}
inline int invert_isometry(int g, int M) {
    return g < M ? (M - g) % M : g;  // reflections are involutions
}
}  // namespace detail

// Exact average of the inner rule over all 2M circle isometries and all n!
// agent orderings. The result is anonymous and neutral, and its worst-case
// social cost never exceeds the inner rule's.
inline Mechanism symmetrize(Mechanism inner) {
    auto base = std::make_shared<Mechanism>(std::move(inner));
    Mechanism out;
    out.name = "symmetrize(" + base->name + ")";
    out.sp_note = "anonymous + neutral; inherits strategyproofness of the inner rule";
    out.eval = [base](const MetricSpace& s, const Profile& a) {
        detail::require(s.kind() == SpaceKind::Circle, "symmetrize: requires a circle");
        int M = s.circle_size(), n = (int)a.size();
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        Int fact = 1;
        for (int i = 2; i <= n; i++) fact *= i;
        Rat w = Rat(1) / (Rat(2 * M) * Rat(fact));
        Lottery acc;
        do {
            Profile pa(n);
            for (int i = 0; i < n; i++) pa[i] = a[perm[i]];
            for (int g = 0; g < 2 * M; g++) {
                Profile b(n);
                for (int i = 0; i < n; i++) b[i] = detail::apply_isometry(g, M, pa[i]);
                Lottery f = (*base)(s, b);
                int ginv = detail::invert_isometry(g, M);
                for (auto& [v, p] : f.mass)
                    acc.add(detail::apply_isometry(ginv, M, v), p * w);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return acc;
    };
    return out;
}

// Registry: rd | pcd | qcd:q=<num>/<den> | pd | pd-general | median.
inline Mechanism make_mechanism(const std::string& spec) {
    if (spec == "rd") return rd();
    if (spec == "pcd") return pcd();
    if (spec == "pd") return pd();
    if (spec == "pd-general") return pd_general();
    if (spec == "median") return median_mechanism();
    if (spec.rfind("qcd:q=", 0) == 0) {
        auto q = parse_rat(spec.substr(6));
        if (!q || *q < 0 || *q > Rat(1, 2))
            throw std::invalid_argument("qcd parameter must be a rational in [0, 1/2]");
        return qcd(*q);
    }
    throw std::invalid_argument("unknown mechanism: " + spec);
}

}  // namespace floc
