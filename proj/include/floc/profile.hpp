#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "floc/metric_space.hpp"

namespace floc {

// Reported locations, one vertex per agent, agent order significant.
using Profile = std::vector<int>;

// Sparse probability distribution over vertices; entries sorted by vertex,
// zero entries dropped.
struct Lottery {
    std::vector<std::pair<int, Rat>> mass;

    static Lottery point(int v) { return Lottery{{{v, Rat(1)}}}; }

    void add(int v, const Rat& p) {
        if (p == 0) return;
        auto it = std::lower_bound(mass.begin(), mass.end(), v,
                                   [](const auto& e, int x) { return e.first < x; });
        if (it != mass.end() && it->first == v) {
            it->second += p;
            if (it->second == 0) mass.erase(it);
        } else {
            mass.insert(it, {v, p});
        }
    }

    Rat total() const {
        Rat t(0);
        for (auto& [v, p] : mass) t += p;
        return t;
    }

    Rat prob(int v) const {
        for (auto& [u, p] : mass)
            if (u == v) return p;
        return Rat(0);
    }

    bool operator==(const Lottery& o) const { return mass == o.mass; }
};

// Expected distance from agent i's reported location to the facility.
inline Rat agent_cost(const MetricSpace& s, const Profile& a, int i, const Lottery& f) {
    Rat c(0);
    for (auto& [v, p] : f.mass) c += p * s.dist(a[i], v);
    return c;
}

inline Rat social_cost_at(const MetricSpace& s, const Profile& a, int v) {
    Rat c(0);
    for (int x : a) c += s.dist(x, v);
    return c;
}

inline Rat social_cost(const MetricSpace& s, const Profile& a, const Lottery& f) {
    Rat c(0);
    for (auto& [v, p] : f.mass) c += p * social_cost_at(s, a, v);
    return c;
}

struct OptResult {
    Rat cost;
    int vertex = 0;  // lowest-index optimum on ties
};

inline OptResult opt_cost(const MetricSpace& s, const Profile& a) {
    OptResult best{social_cost_at(s, a, 0), 0};
    for (int v = 1; v < s.size(); v++) {
        Rat c = social_cost_at(s, a, v);
        if (c < best.cost) best = {c, v};
    }
    return best;
}

// Clockwise arc structure of a circle profile.
//   order:  agent indices sorted clockwise (by vertex, ties by agent index)
//   raw:    raw[j] = arc from order[j] to order[(j+1)%n]
//   facing: facing[i] = arc facing agent i, i.e. raw[(k + n/2) % n] where k is
//           agent i's position in the clockwise order
struct ArcLengths {
    std::vector<int> order;
    std::vector<Rat> raw;
    std::vector<Rat> facing;
};

inline ArcLengths arc_lengths(const MetricSpace& s, const Profile& a) {
    if (s.kind() != SpaceKind::Circle) throw std::invalid_argument("arc_lengths requires a circle");
    int n = (int)a.size();
    if (n < 2) throw std::invalid_argument("arc_lengths requires n >= 2");
    int M = s.circle_size();
    ArcLengths out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](int i, int j) { return a[i] < a[j]; });
    out.raw.resize(n);
    for (int j = 0; j < n; j++) {
        int u = a[out.order[j]], v = a[out.order[(j + 1) % n]];
        int steps = (v - u) % M;
        if (steps < 0) steps += M;
        if (j == n - 1 && steps == 0) steps = M;  // wrap arc closes the circle
        out.raw[j] = Rat(steps, M);
    }
    out.facing.resize(n);
    for (int k = 0; k < n; k++) out.facing[out.order[k]] = out.raw[(k + n / 2) % n];
    return out;
}

// Lexicographic profile enumeration helpers (a[0] most significant).
inline long long profile_count(int m, int n) {
    long long c = 1;
    for (int i = 0; i < n; i++) c *= m;
    return c;
}

inline Profile profile_at(long long rank, int m, int n) {
    Profile a(n);
    for (int i = n - 1; i >= 0; i--) {
        a[i] = (int)(rank % m);
        rank /= m;
    }
    return a;
}

inline long long profile_rank(const Profile& a, int m) {
    long long r = 0;
    for (int x : a) r = r * m + x;
    return r;
}

}  // namespace floc
