#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pmms/topology.hpp"

using namespace pmms;

namespace {

// brute-force membership oracle straight from the clip rule
bool region_has_ap_oracle(int region, int ap, int ap_rows, int ap_cols) {
    const int i = region / (ap_cols + 1);
    const int j = region % (ap_cols + 1);
    const int ar = ap / ap_cols;
    const int ac = ap % ap_cols;
    return (ar == i - 1 || ar == i) && (ac == j - 1 || ac == j);
}

} // namespace

TEST_CASE("default grid geometry census") {
    const auto topo = build_grid(5, 5, 100.0);
    REQUIRE(topo.ap_count() == 25);
    REQUIRE(topo.region_count() == 36);

    std::map<std::size_t, int> census;
    int total = 0;
    for (region_id r = 0; r < topo.region_count(); ++r) {
        ++census[topo.region_aps(r).size()];
        total += static_cast<int>(topo.region_aps(r).size());
    }
    CHECK(census[1] == 4);
    CHECK(census[2] == 16);
    CHECK(census[4] == 16);
    CHECK(total == 100);

    for (ap_id a = 0; a < topo.ap_count(); ++a) CHECK(topo.ap_regions(a).size() == 4);
}

TEST_CASE("region membership examples") {
    const auto topo = build_grid(5, 5, 100.0);
    CHECK(topo.region_aps(0) == std::vector<ap_id>{0});
    CHECK(topo.region_aps(8) == std::vector<ap_id>{1, 2, 6, 7});
    CHECK(topo.home_region(21) == 25);
    CHECK(topo.home_region(7) == 8);
    CHECK(topo.home_region(0) == 0);
}

TEST_CASE("membership matches the clip-rule oracle") {
    const auto topo = build_grid(5, 5, 100.0);
    for (region_id r = 0; r < topo.region_count(); ++r) {
        for (ap_id a = 0; a < topo.ap_count(); ++a) {
            CHECK(topo.region_contains_ap(r, a) == region_has_ap_oracle(r, a, 5, 5));
        }
    }
}

TEST_CASE("incidence duality") {
    const auto topo = build_grid(5, 5, 100.0);
    for (region_id r = 0; r < topo.region_count(); ++r) {
        for (ap_id a : topo.region_aps(r)) {
            const auto& regs = topo.ap_regions(a);
            CHECK(std::find(regs.begin(), regs.end(), r) != regs.end());
        }
    }
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        for (region_id r : topo.ap_regions(a)) CHECK(topo.region_contains_ap(r, a));
    }
}

TEST_CASE("neighbor counts by grid position") {
    const auto topo = build_grid(5, 5, 100.0);
    CHECK(topo.ap_neighbors(0).size() == 3);   // corner
    CHECK(topo.ap_neighbors(2).size() == 5);   // edge
    CHECK(topo.ap_neighbors(12).size() == 8);  // inner
    CHECK(topo.ap_neighbors(24).size() == 3);

    int corners = 0, edges = 0, inner = 0;
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        const auto n = topo.ap_neighbors(a).size();
        if (n == 3) ++corners;
        if (n == 5) ++edges;
        if (n == 8) ++inner;
    }
    CHECK(corners == 4);
    CHECK(edges == 12);
    CHECK(inner == 9);
}

TEST_CASE("adjacent APs always share a region") {
    const auto topo = build_grid(5, 5, 100.0);
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        for (ap_id b : topo.ap_neighbors(a)) {
            bool shared = false;
            for (region_id r : topo.ap_regions(a))
                if (topo.region_contains_ap(r, b)) shared = true;
            CHECK(shared);
        }
    }
}

TEST_CASE("candidate next APs") {
    const auto topo = build_grid(5, 5, 100.0);
    CHECK(candidate_next_aps(6, 0, topo) == std::vector<ap_id>{0});
    CHECK(candidate_next_aps(0, 0, topo) == std::vector<ap_id>{0});
    CHECK(candidate_next_aps(0, 35, topo).empty());

    // brute-force: intersection of the closed neighborhood with the region set
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        for (region_id r = 0; r < topo.region_count(); ++r) {
            std::vector<ap_id> expected;
            for (ap_id b : topo.region_aps(r))
                if (b == a || topo.aps_adjacent(a, b)) expected.push_back(b);
            CHECK(candidate_next_aps(a, r, topo) == expected);
        }
    }
}

TEST_CASE("candidate set is always within the region set") {
    const auto topo = build_grid(5, 5, 100.0);
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        for (region_id r = 0; r < topo.region_count(); ++r) {
            for (ap_id c : candidate_next_aps(a, r, topo)) CHECK(topo.region_contains_ap(r, c));
        }
    }
}

TEST_CASE("distances") {
    const auto topo = build_grid(5, 5, 100.0);
    CHECK(distance(topo.ap_position(0), 0, topo) == doctest::Approx(0.0));
    CHECK(distance({50.0, 0.0}, 0, topo) == doctest::Approx(50.0));
    CHECK(distance({50.0, 0.0}, 1, topo) == doctest::Approx(50.0));
    CHECK(distance(topo.region_center(7), 0, topo) == doctest::Approx(50.0 * std::sqrt(2.0)));
}

TEST_CASE("home region sits next to the AP position") {
    const auto topo = build_grid(5, 5, 100.0);
    for (ap_id a = 0; a < topo.ap_count(); ++a) {
        const auto c = topo.region_center(topo.home_region(a));
        CHECK(distance(c, a, topo) == doctest::Approx(50.0 * std::sqrt(2.0)));
    }
}

TEST_CASE("undersized grids are rejected") {
    CHECK_THROWS_AS(build_grid(1, 5, 100.0), config_error);
    CHECK_THROWS_AS(build_grid(5, 1, 100.0), config_error);
    CHECK_THROWS_AS(build_grid(5, 5, 0.0), config_error);
}

TEST_CASE("non-square grids keep the invariants") {
    const auto topo = build_grid(3, 4, 50.0);
    for (ap_id a = 0; a < topo.ap_count(); ++a) CHECK(topo.ap_regions(a).size() == 4);
    int total = 0;
    for (region_id r = 0; r < topo.region_count(); ++r)
        total += static_cast<int>(topo.region_aps(r).size());
    CHECK(total == topo.ap_count() * 4);
}
