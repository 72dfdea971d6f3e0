#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "pmms/mobility.hpp"

using namespace pmms;

namespace {

// independent validity oracle: incidence and adjacency checked straight from
// grid coordinates, no topology helpers
bool valid_oracle(const mobile_path& p, int ap_rows, int ap_cols) {
    if (p.steps.size() < 2) return false;
    const int reg_cols = ap_cols + 1;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const int ap = p.steps[i].ap;
        const int reg = p.steps[i].region;
        if (ap < 0 || ap >= ap_rows * ap_cols) return false;
        if (reg < 0 || reg >= (ap_rows + 1) * reg_cols) return false;
        const int ar = ap / ap_cols, ac = ap % ap_cols;
        const int ri = reg / reg_cols, rj = reg % reg_cols;
        if (!((ar == ri - 1 || ar == ri) && (ac == rj - 1 || ac == rj))) return false;
        if (p.steps[i].dwell < 1) return false;
        if (i > 0) {
            const int pap = p.steps[i - 1].ap;
            const int preg = p.steps[i - 1].region;
            if (pap == ap) return false;
            if (std::abs(pap / ap_cols - ar) > 1 || std::abs(pap % ap_cols - ac) > 1) return false;
            if (std::abs(preg / reg_cols - ri) > 1 || std::abs(preg % reg_cols - rj) > 1)
                return false;
            if (preg == reg) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("fixed seed reproduces the same path") {
    const auto topo = build_grid(5, 5, 100.0);
    mobility_config cfg;
    rng a(42), b(42);
    const auto p1 = generate_path(topo, cfg, a, 1);
    const auto p2 = generate_path(topo, cfg, b, 1);
    REQUIRE(p1.steps.size() == p2.steps.size());
    for (std::size_t i = 0; i < p1.steps.size(); ++i) {
        CHECK(p1.steps[i].ap == p2.steps[i].ap);
        CHECK(p1.steps[i].region == p2.steps[i].region);
        CHECK(p1.steps[i].dwell == p2.steps[i].dwell);
    }
}

TEST_CASE("10,000 generated paths all pass the validity oracle") {
    const auto topo = build_grid(5, 5, 100.0);
    mobility_config cfg; // history mode, 2..6 APs
    const auto h = generate_history(10000, topo, cfg, 99);
    REQUIRE(h.paths.size() == 10000);
    for (const auto& p : h.paths) {
        CHECK(valid_oracle(p, 5, 5));
        CHECK(path_valid(p, topo));
    }
}

TEST_CASE("test-mode AP counts are supported exactly on 3..6") {
    const auto topo = build_grid(5, 5, 100.0);
    mobility_config cfg;
    cfg.min_aps = 3;
    cfg.max_aps = 6;
    std::map<std::size_t, int> lengths;
    rng rand(5);
    for (int i = 0; i < 10000; ++i) ++lengths[generate_path(topo, cfg, rand).steps.size()];
    CHECK(lengths.size() == 4);
    for (std::size_t len = 3; len <= 6; ++len) CHECK(lengths[len] > 0);
}

TEST_CASE("history sizes and seed separation") {
    const auto topo = build_grid(5, 5, 100.0);
    mobility_config cfg;
    CHECK(generate_history(1, topo, cfg, 7).paths.size() == 1);
    const auto a = generate_history(100, topo, cfg, 1);
    const auto b = generate_history(100, topo, cfg, 2);
    CHECK_FALSE(same_route(a, b));
}

TEST_CASE("impossible length requests are configuration errors") {
    const auto topo = build_grid(5, 5, 100.0);
    rng rand(1);
    mobility_config bad;
    bad.min_aps = 1;
    CHECK_THROWS_AS(generate_path(topo, bad, rand), config_error);
    bad.min_aps = 5;
    bad.max_aps = 3;
    CHECK_THROWS_AS(generate_path(topo, bad, rand), config_error);
}

TEST_CASE("serialization uses the path notation") {
    path_history h;
    mobile_path p;
    p.id = 1;
    p.steps = {{6, 7, 2}, {0, 0, 1}, {1, 1, 3}};
    h.paths.push_back(p);
    std::ostringstream out;
    save_history(h, out);
    CHECK(out.str() == "1;6(7)->0(0)->1(1)\n");
}

TEST_CASE("round trip preserves the routes byte for byte") {
    const auto topo = build_grid(5, 5, 100.0);
    mobility_config cfg;
    const auto h = generate_history(500, topo, cfg, 11);

    std::ostringstream first;
    save_history(h, first);
    std::istringstream in(first.str());
    const auto reloaded = load_history(in, topo);
    CHECK(same_route(h, reloaded));

    std::ostringstream second;
    save_history(reloaded, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("empty history round-trips to an empty file") {
    const auto topo = build_grid(5, 5, 100.0);
    path_history h;
    std::ostringstream out;
    save_history(h, out);
    CHECK(out.str().empty());
    std::istringstream in(out.str());
    CHECK(load_history(in, topo).paths.empty());
}

TEST_CASE("malformed lines report their line number") {
    const auto topo = build_grid(5, 5, 100.0);
    std::istringstream in("1;6(7)->0(0)\nnot a path\n");
    try {
        load_history(in, topo);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("incidence mismatches are validation errors") {
    const auto topo = build_grid(5, 5, 100.0);
    std::istringstream in("1;7(0)->8(9)\n"); // region 0 is covered by AP0 alone
    CHECK_THROWS_AS(load_history(in, topo), validation_error);
}

TEST_CASE("a realistic thirty-path sample loads and validates") {
    // hand-picked routes spanning corridors, corners and diagonal moves
    static const char* corpus =
        "1;6(7)->0(0)->1(1)\n"
        "2;14(16)->8(9)->2(2)->1(1)->0(0)->5(6)\n"
        "3;16(19)->21(25)->15(18)\n"
        "4;10(12)->5(6)\n"
        "5;3(3)->2(2)->1(1)->0(0)->6(7)\n"
        "6;21(25)->15(18)->10(12)\n"
        "7;12(14)->6(7)->0(0)->1(1)\n"
        "8;7(8)->1(1)->0(0)->6(7)\n"
        "9;4(4)->3(3)->2(2)->1(1)->6(7)->0(0)\n"
        "10;7(8)->8(9)->2(2)->1(1)\n"
        "11;1(1)->0(0)->5(6)\n"
        "12;18(21)->17(20)->16(19)->15(18)->10(12)\n"
        "13;4(4)->3(3)->2(2)->1(1)->0(0)->5(6)\n"
        "14;17(20)->16(19)->15(18)->10(12)\n"
        "15;9(10)->8(9)->3(3)->2(2)->1(1)->0(0)\n"
        "16;7(8)->6(7)->5(6)->0(0)\n"
        "17;16(19)->15(18)->10(12)\n"
        "18;13(15)->12(14)->11(13)->10(12)->5(6)\n"
        "19;5(6)->0(0)\n"
        "20;14(16)->13(15)->12(14)->11(13)->10(12)->5(6)\n"
        "21;7(8)->6(7)->1(1)->0(0)\n"
        "22;13(15)->14(16)->19(22)->18(21)->17(20)\n"
        "23;15(18)->10(12)\n"
        "24;6(7)->5(6)->0(0)\n"
        "25;9(10)->4(4)->3(3)->2(2)->1(1)->0(0)\n"
        "26;22(26)->16(19)->15(18)->20(24)\n"
        "27;1(1)->0(0)->5(6)\n"
        "28;0(0)->1(1)\n"
        "29;13(15)->7(8)->6(7)->1(1)->0(0)\n"
        "30;22(26)->21(25)->20(24)->15(18)\n";
    const auto topo = build_grid(5, 5, 100.0);
    std::istringstream in(corpus);
    const auto h = load_history(in, topo);
    REQUIRE(h.paths.size() == 30);
    for (const auto& p : h.paths) CHECK(path_valid(p, topo));

    std::ostringstream out;
    save_history(h, out);
    CHECK(out.str() == corpus);
}

TEST_CASE("beta zero walks uniformly over adjacent regions") {
    const auto topo = build_grid(5, 5, 100.0);
    const region_id start = 14; // inner region, 8 neighbors
    const auto& nbrs = topo.region_neighbors(start);
    REQUIRE(nbrs.size() == 8);

    std::map<region_id, int> counts;
    rng rand(123);
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[pick_next_region(topo, start, 0.0, rand)];

    double chi2 = 0.0;
    const double expect = static_cast<double>(n) / 8.0;
    for (region_id r : nbrs) {
        const double diff = counts[r] - expect;
        chi2 += diff * diff / expect;
    }
    CHECK(chi2 < 24.3); // chi-square df=7 at the 0.001 level
}

TEST_CASE("center bias pulls the walk inward") {
    const auto topo = build_grid(5, 5, 100.0);
    rng rand(17);
    std::map<region_id, int> counts;
    for (int i = 0; i < 20000; ++i) ++counts[pick_next_region(topo, 0, 1.0, rand)];
    // region 7 is the most central neighbor of corner region 0
    CHECK(counts[7] > counts[1]);
    CHECK(counts[7] > counts[6]);
}

TEST_CASE("waypoints near an AP stay inside its cell") {
    const auto topo = build_grid(5, 5, 100.0);
    rng rand(9);
    for (int i = 0; i < 200; ++i) {
        const point w = sample_point_near_ap(topo, 8, 7, rand); // region 8, AP 7 at (200, 100)
        CHECK(w.x >= 150.0);
        CHECK(w.x <= 200.0);
        CHECK(w.y >= 50.0);
        CHECK(w.y <= 100.0);
        ap_id nearest = -1;
        double best = 1e18;
        for (ap_id a : topo.region_aps(8)) {
            const double d = distance(w, a, topo);
            if (d < best) {
                best = d;
                nearest = a;
            }
        }
        CHECK(nearest == 7);
    }
}
