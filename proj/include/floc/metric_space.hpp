#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "floc/rational.hpp"

namespace floc {

enum class SpaceKind { Graph, Circle, PlaneGrid };

inline const char* kind_name(SpaceKind k) {
    switch (k) {
        case SpaceKind::Graph: return "graph";
        case SpaceKind::Circle: return "circle";
        case SpaceKind::PlaneGrid: return "plane-grid";
    }
    return "?";
}

struct Edge {
    int u = 0, v = 0;
    Rat len;
};

// Finite metric space with an exact pairwise distance matrix. Circles are
// normalized to circumference 1. The metric axioms are checked exhaustively
// on construction; factories throw std::invalid_argument on bad input.
class MetricSpace {
public:
    static MetricSpace from_matrix(SpaceKind kind, std::vector<std::vector<Rat>> d,
                                   int circle_size = 0) {
        MetricSpace s;
        s.kind_ = kind;
        s.m_ = (int)d.size();
        s.dist_ = std::move(d);
        s.circle_size_ = circle_size;
        s.validate();
        return s;
    }

    int size() const { return m_; }
    SpaceKind kind() const { return kind_; }
    int circle_size() const { return circle_size_; }
    const Rat& dist(int i, int j) const { return dist_[i][j]; }
    const std::vector<std::vector<Rat>>& matrix() const { return dist_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Opposite vertex on an even circle.
    int antipode(int v) const {
        if (kind_ != SpaceKind::Circle || circle_size_ % 2 != 0)
            throw std::invalid_argument("antipode requires an even circle");
        return (v + circle_size_ / 2) % circle_size_;
    }

    std::vector<Edge> edges_;  // retained for graph serialization

private:
    void validate() const {
        if (m_ <= 0) throw std::invalid_argument("empty space");
        for (int i = 0; i < m_; i++)
            if ((int)dist_[i].size() != m_) throw std::invalid_argument("distance matrix not square");
        for (int i = 0; i < m_; i++) {
            if (dist_[i][i] != 0) throw std::invalid_argument("d(i,i) != 0");
            for (int j = 0; j < m_; j++) {
                if (i != j && dist_[i][j] <= 0) throw std::invalid_argument("nonpositive distance");
                if (dist_[i][j] != dist_[j][i]) throw std::invalid_argument("asymmetric distance");
            }
        }
        for (int i = 0; i < m_; i++)
            for (int j = 0; j < m_; j++)
                for (int k = 0; k < m_; k++)
                    if (dist_[i][j] > dist_[i][k] + dist_[k][j])
                        throw std::invalid_argument("triangle inequality violated");
    }

    SpaceKind kind_ = SpaceKind::Graph;
    int m_ = 0;
    int circle_size_ = 0;
    std::vector<std::vector<Rat>> dist_;
};

// Discrete circle with M evenly spaced vertices, circumference 1:
// d(i,j) = min(|i-j|, M-|i-j|) / M.
inline MetricSpace make_circle(int M) {
    if (M < 3) throw std::invalid_argument("circle needs M >= 3");
    std::vector<std::vector<Rat>> d(M, std::vector<Rat>(M));
    for (int i = 0; i < M; i++)
        for (int j = 0; j < M; j++) {
            int a = std::abs(i - j);
            d[i][j] = Rat(std::min(a, M - a), M);
        }
    return MetricSpace::from_matrix(SpaceKind::Circle, std::move(d), M);
}

// Shortest-path metric of an undirected weighted graph (exact Floyd-Warshall).
inline MetricSpace make_graph(int m, const std::vector<Edge>& edges) {
    if (m <= 0) throw std::invalid_argument("graph needs at least one vertex");
    std::vector<std::vector<Rat>> d(m, std::vector<Rat>(m));
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; i++) reach[i][i] = true;
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= m || e.v < 0 || e.v >= m || e.u == e.v)
            throw std::invalid_argument("bad edge endpoints");
        if (e.len <= 0) throw std::invalid_argument("nonpositive edge length");
        if (!reach[e.u][e.v] || e.len < d[e.u][e.v]) {
            d[e.u][e.v] = d[e.v][e.u] = e.len;
            reach[e.u][e.v] = reach[e.v][e.u] = true;
        }
    }
    for (int k = 0; k < m; k++)
        for (int i = 0; i < m; i++) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < m; j++) {
                if (!reach[k][j]) continue;
                Rat via = d[i][k] + d[k][j];
                if (!reach[i][j] || via < d[i][j]) {
                    d[i][j] = via;
                    reach[i][j] = true;
                }
            }
        }
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            if (!reach[i][j]) throw std::invalid_argument("graph is disconnected");
    MetricSpace s = MetricSpace::from_matrix(SpaceKind::Graph, std::move(d));
    s.edges_ = edges;
    return s;
}

// Six-vertex benchmark graph: a perfect matching of length-1 edges plus all
// six "cross" edges of length 2 between matched pairs.
inline MetricSpace fig_graph6() {
    std::vector<Edge> es = {
        {0, 3, Rat(1)}, {1, 4, Rat(1)}, {2, 5, Rat(1)},
        {0, 4, Rat(2)}, {0, 5, Rat(2)}, {1, 3, Rat(2)},
        {1, 5, Rat(2)}, {2, 3, Rat(2)}, {2, 4, Rat(2)},
    };
    return make_graph(6, es);
}

// Star with three unit-length leaf edges; vertex 0 is the center.
inline MetricSpace star3_graph() {
    std::vector<Edge> es = {{0, 1, Rat(1)}, {0, 2, Rat(1)}, {0, 3, Rat(1)}};
    return make_graph(4, es);
}

}  // namespace floc
