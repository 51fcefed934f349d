#include <catch2/catch_amalgamated.hpp>

#include "floc/profile.hpp"

using namespace floc;

TEST_CASE("rational helpers") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(rat_str(rat(3, 14)) == "3/14");
    CHECK(rat_str(rat(-6, 4)) == "-3/2");
    CHECK(rat_str(rat(7)) == "7");
    CHECK(parse_rat("3/14") == rat(3, 14));
    CHECK(parse_rat("-2") == rat(-2));
    CHECK(!parse_rat("1/0").has_value());
    CHECK(!parse_rat("x").has_value());
    CHECK(!parse_rat("").has_value());
    CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
    CHECK(rat_to_double(rat(1, 4)) == 0.25);
}

TEST_CASE("circle distances are exact shortest arcs") {
    MetricSpace c8 = make_circle(8);
    CHECK(c8.size() == 8);
    CHECK(c8.kind() == SpaceKind::Circle);
    CHECK(c8.circle_size() == 8);
    CHECK(c8.dist(0, 3) == rat(3, 8));
    CHECK(c8.dist(0, 5) == rat(3, 8));
    CHECK(c8.dist(0, 4) == rat(1, 2));
    CHECK(c8.dist(7, 1) == rat(1, 4));
    for (int i = 0; i < 8; i++) CHECK(c8.dist(i, i) == 0);
    CHECK(c8.antipode(1) == 5);
    CHECK_THROWS_AS(make_circle(2), std::invalid_argument);
    MetricSpace c3 = make_circle(3);
    CHECK(c3.dist(0, 2) == rat(1, 3));
    CHECK_THROWS_AS(c3.antipode(0), std::invalid_argument);
}

TEST_CASE("graph metric via exact shortest paths") {
    MetricSpace star = star3_graph();
    CHECK(star.size() == 4);
    for (int leaf = 1; leaf <= 3; leaf++) CHECK(star.dist(0, leaf) == rat(1));
    for (int i = 1; i <= 3; i++)
        for (int j = 1; j <= 3; j++)
            if (i != j) CHECK(star.dist(i, j) == rat(2));

    MetricSpace g6 = fig_graph6();
    CHECK(g6.dist(0, 3) == rat(1));
    CHECK(g6.dist(0, 4) == rat(2));
    CHECK(g6.dist(3, 4) == rat(3));
    CHECK(g6.dist(0, 1) == rat(3));
    CHECK(g6.dist(0, 2) == rat(3));

    SECTION("rational lengths combine exactly") {
        std::vector<Edge> es = {{0, 1, rat(1, 3)}, {1, 2, rat(1, 6)}, {0, 2, rat(2)}};
        MetricSpace g = make_graph(3, es);
        CHECK(g.dist(0, 2) == rat(1, 2));
    }
    SECTION("disconnected graph rejected") {
        std::vector<Edge> es = {{0, 1, rat(1)}};
        CHECK_THROWS_AS(make_graph(3, es), std::invalid_argument);
    }
    SECTION("nonpositive length rejected") {
        std::vector<Edge> es = {{0, 1, rat(0)}};
        CHECK_THROWS_AS(make_graph(2, es), std::invalid_argument);
        std::vector<Edge> es2 = {{0, 1, rat(-1)}};
        CHECK_THROWS_AS(make_graph(2, es2), std::invalid_argument);
    }
    SECTION("bad endpoints rejected") {
        std::vector<Edge> es = {{0, 2, rat(1)}};
        CHECK_THROWS_AS(make_graph(2, es), std::invalid_argument);
    }
}

TEST_CASE("metric axioms checked exhaustively at construction") {
    // asymmetry
    std::vector<std::vector<Rat>> d = {{rat(0), rat(1)}, {rat(2), rat(0)}};
    CHECK_THROWS_AS(MetricSpace::from_matrix(SpaceKind::Graph, d), std::invalid_argument);
    // triangle violation: d(0,2) > d(0,1) + d(1,2)
    std::vector<std::vector<Rat>> t = {
        {rat(0), rat(1), rat(5)},
        {rat(1), rat(0), rat(1)},
        {rat(5), rat(1), rat(0)},
    };
    CHECK_THROWS_AS(MetricSpace::from_matrix(SpaceKind::Graph, t), std::invalid_argument);
    // zero off-diagonal
    std::vector<std::vector<Rat>> z = {{rat(0), rat(0)}, {rat(0), rat(0)}};
    CHECK_THROWS_AS(MetricSpace::from_matrix(SpaceKind::Graph, z), std::invalid_argument);
}

TEST_CASE("clockwise arcs and facing arcs") {
    MetricSpace c14 = make_circle(14);
    ArcLengths arcs = arc_lengths(c14, {0, 2, 5});
    REQUIRE(arcs.raw.size() == 3);
    CHECK(arcs.raw[0] == rat(2, 14));
    CHECK(arcs.raw[1] == rat(3, 14));
    CHECK(arcs.raw[2] == rat(9, 14));
    CHECK(arcs.facing[0] == rat(3, 14));
    CHECK(arcs.facing[1] == rat(9, 14));
    CHECK(arcs.facing[2] == rat(2, 14));

    SECTION("facing arcs always sum to 1") {
        MetricSpace c5 = make_circle(5);
        for (int a = 0; a < 5; a++)
            for (int b = 0; b < 5; b++)
                for (int c = 0; c < 5; c++) {
                    ArcLengths ar = arc_lengths(c5, {a, b, c});
                    Rat sum(0), sumf(0);
                    for (auto& r : ar.raw) sum += r;
                    for (auto& f : ar.facing) sumf += f;
                    CHECK(sum == rat(1));
                    CHECK(sumf == rat(1));
                }
    }
    SECTION("all agents coincident: arcs (0, 0, 1)") {
        ArcLengths ar = arc_lengths(c14, {3, 3, 3});
        CHECK(ar.raw == std::vector<Rat>{rat(0), rat(0), rat(1)});
        CHECK(ar.order == std::vector<int>{0, 1, 2});
    }
    SECTION("coincident agents keep index order") {
        MetricSpace c8 = make_circle(8);
        ArcLengths ar = arc_lengths(c8, {5, 0, 5});
        CHECK(ar.order == std::vector<int>{1, 0, 2});
        CHECK(ar.raw == std::vector<Rat>{rat(5, 8), rat(0), rat(3, 8)});
        CHECK(ar.facing[0] == rat(3, 8));
        CHECK(ar.facing[1] == rat(0));
        CHECK(ar.facing[2] == rat(5, 8));
    }
    SECTION("five agents use offset n/2 = 2") {
        MetricSpace c10 = make_circle(10);
        ArcLengths ar = arc_lengths(c10, {0, 1, 3, 6, 8});
        // raw arcs: 1,2,3,2,2 (tenths); agent i faces raw[(i+2) % 5]
        CHECK(ar.raw == std::vector<Rat>{rat(1, 10), rat(2, 10), rat(3, 10), rat(2, 10),
                                         rat(2, 10)});
        CHECK(ar.facing[0] == rat(3, 10));
        CHECK(ar.facing[1] == rat(2, 10));
        CHECK(ar.facing[2] == rat(2, 10));
        CHECK(ar.facing[3] == rat(1, 10));
        CHECK(ar.facing[4] == rat(2, 10));
    }
    SECTION("n = 2") {
        MetricSpace c8 = make_circle(8);
        ArcLengths ar = arc_lengths(c8, {1, 4});
        CHECK(ar.raw == std::vector<Rat>{rat(3, 8), rat(5, 8)});
        CHECK(ar.facing[0] == rat(5, 8));
        CHECK(ar.facing[1] == rat(3, 8));
    }
    CHECK_THROWS_AS(arc_lengths(c14, {0}), std::invalid_argument);
    CHECK_THROWS_AS(arc_lengths(star3_graph(), {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("agent cost of a lottery") {
    // profile (0, 1/4, 1/2) realized as vertices (0, 1, 2) on the 4-cycle
    MetricSpace c4 = make_circle(4);
    Profile a = {0, 1, 2};
    Lottery f;
    f.add(0, rat(1, 4));
    f.add(1, rat(1, 2));
    f.add(2, rat(1, 4));
    CHECK(agent_cost(c4, a, 0, f) == rat(1, 4));
    CHECK(agent_cost(c4, a, 1, f) == rat(1, 8));
    CHECK(agent_cost(c4, a, 2, f) == rat(1, 4));
    CHECK(social_cost(c4, a, f) == rat(5, 8));
}

TEST_CASE("optimal facility location") {
    MetricSpace c4 = make_circle(4);
    Profile a = {0, 1, 2};
    // independent enumeration of every vertex
    Rat best;
    int best_v = -1;
    for (int v = 0; v < 4; v++) {
        Rat sc(0);
        for (int x : a) sc += c4.dist(x, v);
        if (best_v < 0 || sc < best) { best = sc; best_v = v; }
    }
    OptResult opt = opt_cost(c4, a);
    CHECK(opt.cost == best);
    CHECK(opt.cost == rat(1, 2));
    CHECK(opt.vertex == best_v);
    CHECK(opt.vertex == 1);

    SECTION("ties resolve to the lowest vertex index") {
        OptResult o2 = opt_cost(c4, {0, 1});
        CHECK(o2.cost == rat(1, 4));
        CHECK(o2.vertex == 0);
    }
    SECTION("degenerate profile has zero optimum") {
        OptResult o3 = opt_cost(c4, {2, 2, 2});
        CHECK(o3.cost == 0);
        CHECK(o3.vertex == 2);
    }
}

TEST_CASE("lottery bookkeeping") {
    Lottery f;
    f.add(3, rat(1, 2));
    f.add(1, rat(1, 4));
    f.add(3, rat(1, 4));
    CHECK(f.mass.size() == 2);
    CHECK(f.mass[0].first == 1);
    CHECK(f.prob(3) == rat(3, 4));
    CHECK(f.total() == rat(1));
    f.add(1, rat(-1, 4));
    CHECK(f.prob(1) == 0);
    CHECK(f.mass.size() == 1);
    CHECK(Lottery::point(2).prob(2) == rat(1));
}

TEST_CASE("profile enumeration is lexicographic and invertible") {
    CHECK(profile_count(4, 3) == 64);
    CHECK(profile_at(0, 4, 3) == Profile{0, 0, 0});
    CHECK(profile_at(1, 4, 3) == Profile{0, 0, 1});
    CHECK(profile_at(4, 4, 3) == Profile{0, 1, 0});
    CHECK(profile_at(63, 4, 3) == Profile{3, 3, 3});
    for (long long r = 0; r < 64; r++)
        CHECK(profile_rank(profile_at(r, 4, 3), 4) == r);
}
