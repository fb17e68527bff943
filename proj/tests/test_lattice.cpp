#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "persim/lattice.hpp"

using persim::LatticeGeometry;
using persim::SiteIndex;

namespace {

// brute-force neighbor set from coordinate arithmetic, independent of the
// class's own neighbor code
std::set<SiteIndex> brute_force_neighbors(int d, SiteIndex L, SiteIndex site) {
    std::vector<SiteIndex> coords(d);
    SiteIndex rest = site;
    for (int a = d - 1; a >= 0; --a) {
        coords[a] = rest % L;
        rest /= L;
    }
    std::set<SiteIndex> result;
    for (int a = 0; a < d; ++a) {
        for (int dir : {-1, +1}) {
            std::vector<SiteIndex> c = coords;
            c[a] = (c[a] + dir + L) % L;
            SiteIndex idx = 0;
            for (int b = 0; b < d; ++b) idx = idx * L + c[b];
            result.insert(idx);
        }
    }
    return result;
}

}  // namespace

TEST_CASE("geometry site counts") {
    CHECK(LatticeGeometry(2, 3).num_sites() == 9);
    CHECK(LatticeGeometry(5, 21).num_sites() == 4084101);
    CHECK(LatticeGeometry(1, 4000001).num_sites() == 4000001);
}

TEST_CASE("geometry rejects bad sizes") {
    CHECK_THROWS_AS(LatticeGeometry(2, 4), std::invalid_argument);   // even
    CHECK_THROWS_AS(LatticeGeometry(2, 100), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGeometry(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGeometry(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(LatticeGeometry(5, 3000001), std::invalid_argument);  // L^d overflow
    CHECK_THROWS_WITH_AS(LatticeGeometry(3, 10), doctest::Contains("odd"),
                         std::invalid_argument);
}

TEST_CASE("ring neighbors wrap") {
    LatticeGeometry g(1, 5);
    auto n = g.neighbors(0);
    CHECK(std::set<SiteIndex>(n.begin(), n.end()) == std::set<SiteIndex>{4, 1});
    CHECK(g.axis_neighbor(4, 0, +1) == 0);
}

TEST_CASE("3x3 center neighbors") {
    LatticeGeometry g(2, 3);
    auto n = g.neighbors(4);
    CHECK(std::set<SiteIndex>(n.begin(), n.end()) ==
          std::set<SiteIndex>{1, 7, 3, 5});
    // wrap along the fast axis
    CHECK(g.axis_neighbor(0, 1, -1) == g.coords_to_site({0, 2}));
}

TEST_CASE("neighbors match brute force and are symmetric") {
    for (int d : {1, 2, 3}) {
        for (SiteIndex L : {3, 5}) {
            LatticeGeometry g(d, L);
            for (SiteIndex i = 0; i < g.num_sites(); ++i) {
                auto n = g.neighbors(i);
                CHECK(n.size() == static_cast<std::size_t>(2 * d));
                std::set<SiteIndex> got(n.begin(), n.end());
                CHECK(got.size() == n.size());  // no duplicates
                CHECK(got == brute_force_neighbors(d, L, i));
                for (SiteIndex j : n) {
                    auto back = g.neighbors(j);
                    CHECK(std::count(back.begin(), back.end(), i) >= 1);
                }
            }
        }
    }
}

TEST_CASE("coordinate round trip is the identity") {
    LatticeGeometry g(3, 5);
    for (SiteIndex i = 0; i < g.num_sites(); ++i)
        CHECK(g.coords_to_site(g.site_to_coords(i)) == i);
}

TEST_CASE("axis moves compose to the identity") {
    LatticeGeometry g(3, 3);
    for (SiteIndex i = 0; i < g.num_sites(); ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(g.axis_neighbor(g.axis_neighbor(i, a, +1), a, -1) == i);
}

TEST_CASE("invalid site and axis are rejected") {
    LatticeGeometry g(2, 3);
    CHECK_THROWS_AS(g.neighbors(-1), std::out_of_range);
    CHECK_THROWS_AS(g.neighbors(9), std::out_of_range);
    CHECK_THROWS_AS(g.axis_neighbor(0, 2, +1), std::invalid_argument);
    CHECK_THROWS_AS(g.axis_neighbor(0, 0, 2), std::invalid_argument);
}
