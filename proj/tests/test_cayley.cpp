#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "hnnpat/branch.hpp"
#include "hnnpat/cayley.hpp"

using namespace hnnpat;

namespace {

const Presentation& G11() {
  static Presentation p = Presentation::g11();
  return p;
}

const Presentation& GW() {
  static Presentation p = Presentation::gw();
  return p;
}

const DistanceMap& ball6() {
  static DistanceMap dm(G11(), 6);
  return dm;
}

const DistanceMap& gw_ball5() {
  static DistanceMap dm(GW(), 5);
  return dm;
}

NormalForm nf(const Presentation& p, const std::string& s) {
  return normalize(p, parse_word(p, s));
}

}  // namespace

TEST_CASE("generator alphabet lists base letters then stable letters") {
  auto letters = generator_alphabet(G11());
  REQUIRE(letters.size() == 12);
  CHECK(letters[0].index == 0);
  CHECK_FALSE(letters[0].stable);
  CHECK(letters[0].sign == 1);
  CHECK(letters[1].sign == -1);
  CHECK(letters[8].stable);
  CHECK(letters[8].index == 0);
  CHECK(letters[11].index == 1);
  CHECK(letters[11].sign == -1);
}

TEST_CASE("sphere sizes match the frozen counts") {
  CHECK(ball6().sphere_sizes() ==
        std::vector<std::uint64_t>{1, 12, 84, 556, 3660, 23948, 156748});
  CHECK(gw_ball5().sphere_sizes() ==
        std::vector<std::uint64_t>{1, 12, 86, 600, 4082, 27844});
}

TEST_CASE("distances and geodesic checks on hand examples") {
  const DistanceMap& dm = ball6();
  CHECK(dm.distance(nf_identity(G11())) == 0);
  std::string w = "b'";
  for (int n = 0; n <= 4; ++n) {
    CHECK(dm.distance(nf(G11(), w)) == n + 1);
    w += " s";
  }
  CHECK(dm.is_geodesic(parse_word(G11(), "c^2 b s'")));
  CHECK_FALSE(dm.is_geodesic(parse_word(G11(), "a a'")));
  CHECK_THROWS_AS((void)dm.distance(nf(G11(), "s^7")), out_of_radius_error);
}

TEST_CASE("the base plane is totally geodesic in both groups") {
  for (const DistanceMap* dm : {&ball6(), &gw_ball5()}) {
    const BaseMetric& bm = dm->pres().metric();
    std::size_t checked = 0;
    for (std::size_t i = 0; i < dm->size(); ++i) {
      NormalForm e = dm->element(i);
      if (e.segments() != 0) continue;
      CHECK(dm->distance_at(i) == bm.distance(nf_tail(e)));
      ++checked;
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("geodesic counts agree with hand values and the base metric") {
  const DistanceMap& dm = ball6();
  CHECK(dm.geodesic_count(nf_identity(G11())) == 1);
  CHECK(dm.geodesic_count(nf(G11(), "a^2")) == 3);       // aa, cd, dc
  CHECK(dm.geodesic_count(nf(G11(), "a c")) == 2);       // ac, ca
  CHECK(dm.geodesic_count(nf(G11(), "s")) == 1);
  CHECK(dm.geodesic_count(nf(G11(), "b' s")) == 1);
  const BaseMetric& bm = G11().metric();
  for (std::size_t i = 0; i < dm.size(); ++i) {
    NormalForm e = dm.element(i);
    if (e.segments() != 0 || dm.distance_at(i) > 4) continue;
    CHECK(dm.geodesic_count(e) == bm.geodesic_word_count(nf_tail(e)));
  }
}

TEST_CASE("rule powers are equidistant on both sides") {
  for (const Presentation* p : {&G11(), &GW()}) {
    const BaseMetric& bm = p->metric();
    for (const StableRule& r : p->rules()) {
      for (Coord k = -64; k <= 64; ++k) {
        Vec u(p->rank()), v(p->rank());
        for (int i = 0; i < p->rank(); ++i) {
          u[i] = k * r.u_vec[i];
          v[i] = k * r.v_vec[i];
        }
        CHECK(bm.distance(u) == bm.distance(v));
      }
    }
  }
}

TEST_CASE("the strip over b' carries the frozen labels") {
  const DistanceMap& dm = ball6();
  Strip s = strip_crossed(dm, nf(G11(), "b'"), 0, 1);
  CHECK(s.child_key == plane_key(nf(G11(), "b' s")));
  CHECK(s.parent_key(2).empty());
  CHECK(s.rule == 0);
  CHECK(s.sign == 1);
  CHECK(s.base == Vec{0, -1});
  CHECK(s.dir_parent == Vec{1, 0});
  CHECK(s.dir_child == Vec{1, 1});
  CHECK(s.lo == -6);
  CHECK(s.hi == 6);
  CHECK(s.labels ==
        std::vector<int>{6, 5, 4, 3, 2, 1, 1, 1, 2, 3, 4, 5, 6});
  CHECK(s.label(0) == 1);
  CHECK_THROWS_AS(s.label(7), out_of_radius_error);

  CrossingLabels cl = crossing_labels(dm, nf(G11(), "b'"), 0, 1);
  CHECK(cl.landing_lo == -5);
  CHECK(cl.landing_hi == 5);
  CHECK(cl.landing ==
        std::vector<int>{6, 5, 4, 3, 2, 2, 2, 3, 4, 5, 6});
  for (long k = cl.landing_lo; k <= cl.landing_hi; ++k)
    CHECK(cl.landing[std::size_t(k - cl.landing_lo)] == cl.strip.label(k) + 1);
}

TEST_CASE("deeper strips along b' s^k carry the frozen labels") {
  const DistanceMap& dm = ball6();
  Strip s2 = strip_crossed(dm, nf(G11(), "b' s"), 0, 1);
  CHECK(s2.child_key == plane_key(nf(G11(), "b' s s")));
  CHECK(s2.lo == -5);
  CHECK(s2.hi == 5);
  CHECK(s2.labels == std::vector<int>{6, 5, 4, 3, 3, 2, 3, 3, 4, 5, 6});

  Strip s3 = strip_crossed(dm, nf(G11(), "b' s s"), 0, 1);
  CHECK(s3.lo == -4);
  CHECK(s3.hi == 4);
  CHECK(s3.labels == std::vector<int>{6, 6, 5, 4, 3, 4, 5, 6, 6});
  std::vector<int> slice(s3.labels.begin() + 4, s3.labels.end());
  CHECK(slice == std::vector<int>{3, 4, 5, 6, 6});
}

TEST_CASE("a high departure line yields a wide plateau") {
  const DistanceMap& dm = ball6();
  Strip s = strip_crossed(dm, nf(G11(), "c^2 b"), 0, 1);
  CHECK(s.base == Vec{0, 3});
  CHECK(s.lo == -6);
  CHECK(s.hi == 6);
  CHECK(s.labels ==
        std::vector<int>{6, 5, 4, 3, 3, 3, 3, 3, 3, 3, 4, 5, 6});
}

TEST_CASE("a downward crossing after c^2 builds the t-strip") {
  const DistanceMap& dm = ball6();
  Strip s = strip_crossed(dm, nf(G11(), "c^2"), 1, -1);
  CHECK(s.rule == 1);
  CHECK(s.sign == -1);
  CHECK(s.dir_parent == Vec{1, -1});
  CHECK(s.dir_child == Vec{1, 0});
  CHECK(s.lo == -2);
  CHECK(s.hi == 6);
  CHECK(s.labels == std::vector<int>{6, 5, 4, 3, 2, 3, 4, 5, 6});
}

TEST_CASE("enumerate_strips is deterministic and windows end at the boundary") {
  DistanceMap dm(G11(), 4);
  auto a = enumerate_strips(dm);
  auto b = enumerate_strips(dm);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() > 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].child_key == b[i].child_key);
    CHECK(a[i].labels == b[i].labels);
    CHECK(a[i].labels.front() == dm.radius());
    CHECK(a[i].labels.back() == dm.radius());
  }
}

TEST_CASE("crossing pairs link strips through shared planes") {
  DistanceMap dm(G11(), 4);
  auto strips = enumerate_strips(dm);
  auto pairs = enumerate_crossing_pairs(dm, strips);
  CHECK(!pairs.empty());
  for (const CrossingPair& cp : pairs)
    CHECK(strips[cp.exit].parent_key(2) == strips[cp.entry].child_key);
}

TEST_CASE("crossing kinds classify the four geometries") {
  DistanceMap dm(G11(), 5);
  Strip entry = strip_crossed(dm, nf(G11(), "b'"), 0, 1);

  Strip exit2 = strip_crossed(dm, nf(G11(), "b' s"), 0, 1);
  CHECK(crossing_kind(entry, exit2) == 2);

  Strip down1 = strip_crossed(dm, nf_identity(G11()), 0, -1);
  Strip down2 = strip_crossed(dm, nf(G11(), "s'"), 0, -1);
  CHECK(down2.parent_key(2) == down1.child_key);
  CHECK(crossing_kind(down1, down2) == 3);

  Strip exit4 = strip_crossed(dm, nf(G11(), "b' s"), 1, -1);
  CHECK(exit4.child_key == plane_key(nf(G11(), "b' s t'")));
  CHECK(crossing_kind(entry, exit4) == 4);

  Strip exit1 = strip_crossed(dm, nf(G11(), "b' s b"), 0, -1);
  CHECK(exit1.child_key == plane_key(nf(G11(), "b' s b s'")));
  CHECK(crossing_kind(entry, exit1) == 1);
}

TEST_CASE("the wide group admits a kind-0 crossing") {
  DistanceMap dm(GW(), 4);
  Strip entry = strip_crossed(dm, nf_identity(GW()), 0, -1);
  Strip exit = strip_crossed(dm, nf(GW(), "s' a"), 1, 1);
  CHECK(exit.child_key == plane_key(nf(GW(), "s' a t")));
  CHECK(exit.parent_key(2) == entry.child_key);
  CHECK(crossing_kind(entry, exit) == 0);
}

TEST_CASE("distance maps round-trip through save and load") {
  DistanceMap dm(G11(), 4);
  std::stringstream buf;
  dm.save(buf);
  DistanceMap back = DistanceMap::load(buf, G11());
  CHECK(back.radius() == 4);
  CHECK(back.size() == dm.size());
  CHECK(back.sphere_sizes() == dm.sphere_sizes());
  CHECK(back.distance(nf(G11(), "b' s")) == 2);

  std::stringstream buf2;
  dm.save(buf2);
  CHECK_THROWS_AS(DistanceMap::load(buf2, GW()), precondition_error);

  std::stringstream trunc(buf.str().substr(0, 64));
  CHECK_THROWS_AS(DistanceMap::load(trunc, G11()), malformed_word_error);
}

TEST_CASE("the element cap aborts a build with the finished radius") {
  try {
    DistanceMap dm(G11(), 6, 500);
    FAIL("build should have hit the cap");
  } catch (const resource_error& e) {
    CHECK(e.completed_radius == 2);
  }
}

TEST_CASE("branch oracle reproduces ball distances and counts") {
  BranchOracle oracle(G11());
  CHECK(oracle.weight_scale() == 1);
  REQUIRE(oracle.weight().size() == 2);
  CHECK(std::abs(oracle.weight()[0]) == 1);
  CHECK(oracle.weight()[1] == 0);

  const DistanceMap& dm = ball6();
  for (std::size_t i = 0; i < dm.size(); ++i) {
    if (dm.distance_at(i) > 4 && i % 97 != 0) continue;
    NormalForm e = dm.element(i);
    CHECK(oracle.distance(e) == dm.distance_at(i));
    CHECK(oracle.geodesic_count(e) == dm.geodesic_count(e));
  }
  CHECK(oracle.distance(nf(G11(), "b' s^2 a^3")) == 6);
  CHECK(oracle.distance(nf(G11(), "b' s^2 a^4")) == 6);
  CHECK(oracle.distance(nf(G11(), "b' s^3")) == 4);
  CHECK(branch_distance(oracle, G11(), nf(G11(), "s"), nf(G11(), "s a")) == 1);
}

TEST_CASE("no weight vector exists for the wide group") {
  CHECK_THROWS_AS(BranchOracle{GW()}, precondition_error);
}
