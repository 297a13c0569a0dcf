#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fasttrack/environment.hpp"
#include "fasttrack/errors.hpp"
#include "oracles.hpp"

using namespace fasttrack;

namespace {

Region square_region() {
  Region r;
  r.id = "sq";
  r.quad = {{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}}};
  r.entrance_edge = 0;  // bottom in vertex order: (0,0)->(1,0)
  r.exit_edge = 2;      // (1,1)->(0,1)
  return r;
}

Region rect_region_2x1() {
  Region r;
  r.id = "rect";
  r.quad = {{Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{0, 1}}};
  r.entrance_edge = 0;
  r.exit_edge = 2;
  return r;
}

}  // namespace

TEST_CASE("cone_opening_angle worked cases") {
  CHECK(cone_opening_angle(square_region()) == doctest::Approx(M_PI / 2).epsilon(1e-9));
  CHECK(cone_opening_angle(rect_region_2x1()) ==
        doctest::Approx(std::acos(-0.6)).epsilon(1e-9));

  // near-degenerate strip: the crossing diagonals become parallel and the
  // cone collapses toward zero
  Region thin = square_region();
  thin.quad = {{Point{0, 0}, Point{1, 0}, Point{1, 1e4}, Point{0, 1e4}}};
  CHECK(cone_opening_angle(thin) < 1e-3);
}

TEST_CASE("dominant_flow midpoints") {
  CHECK(dominant_flow(square_region()) == doctest::Approx(M_PI / 2));

  Region lr = square_region();
  lr.entrance_edge = 3;  // left edge (0,1)->(0,0)
  lr.exit_edge = 1;      // right edge (1,0)->(1,1)
  CHECK(dominant_flow(lr) == doctest::Approx(0.0));

  Region br = square_region();
  br.entrance_edge = 0;
  br.exit_edge = 1;  // bottom -> right edge
  CHECK(dominant_flow(br) == doctest::Approx(std::atan2(0.5, 0.5)));
}

TEST_CASE("region_lookup order and class gating") {
  EnvironmentMap m;
  Region a = square_region();
  a.id = "a";
  Region b = square_region();
  b.id = "b";
  m.regions = {a, b};

  const Region* hit = region_lookup(m, {0.5, 0.5}, 1);
  REQUIRE(hit != nullptr);
  CHECK(hit->id == "a");  // earlier declaration wins
  CHECK(region_lookup(m, {5, 5}, 1) == nullptr);

  m.regions[0].applicable_classes = {2};
  hit = region_lookup(m, {0.5, 0.5}, 1);
  REQUIRE(hit != nullptr);
  CHECK(hit->id == "b");  // first region does not admit class 1
}

TEST_CASE("project_to_cone worked cases") {
  const double th = M_PI / 2;
  const Point inside{10 * std::cos(M_PI / 6), 10 * std::sin(M_PI / 6)};
  CHECK((project_to_cone(inside, 0.0, th) - inside).norm() == doctest::Approx(0.0));

  const Point outside{10 * std::cos(M_PI / 3), 10 * std::sin(M_PI / 3)};
  const Point proj = project_to_cone(outside, 0.0, th);
  CHECK(proj.x() == doctest::Approx(10 * std::cos(M_PI / 4)));
  CHECK(proj.y() == doctest::Approx(10 * std::sin(M_PI / 4)));

  // two-way: 170 deg already lies inside the mirrored cone [135, 225] deg
  const double a170 = 170.0 * M_PI / 180.0;
  const Point back{10 * std::cos(a170), 10 * std::sin(a170)};
  CHECK((project_to_cone(back, 0.0, th, true) - back).norm() == doctest::Approx(0.0));

  // two-way: 110 deg sits between the cones; the mirrored boundary at 135 deg
  // is the nearer one
  const double a110 = 110.0 * M_PI / 180.0;
  const Point between{10 * std::cos(a110), 10 * std::sin(a110)};
  const Point bp = project_to_cone(between, 0.0, th, true);
  CHECK(std::atan2(bp.y(), bp.x()) == doctest::Approx(3 * M_PI / 4));
  CHECK(bp.norm() == doctest::Approx(10.0));
}

TEST_CASE("project_to_cone idempotence and magnitude invariants") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), mag(0.1, 50.0),
      th(0.05, M_PI);
  for (int i = 0; i < 5000; ++i) {
    const double mu = ang(rng), theta = th(rng), m = mag(rng);
    const double a = ang(rng);
    const Point d{m * std::cos(a), m * std::sin(a)};
    const bool two_way = (i % 2) == 0;
    const Point once = project_to_cone(d, mu, theta, two_way);
    const Point twice = project_to_cone(once, mu, theta, two_way);
    CHECK(once.norm() == doctest::Approx(m).epsilon(1e-12));
    CHECK(std::abs(wrap_angle(std::atan2(twice.y(), twice.x()) -
                              std::atan2(once.y(), once.x()))) <= 1e-9);
  }
}

TEST_CASE("clamp_to_roi moves outside centers to the boundary") {
  Region r = square_region();
  ClassMotionProfile prof;
  KalmanState inside = KalmanState::from_box(Box::from_center({0.5, 0.5}, 0.1, 0.1), prof);
  CHECK((clamp_to_roi(inside, r).mean - inside.mean).norm() == doctest::Approx(0.0));

  // right of the right edge, within its vertical span
  KalmanState right = KalmanState::from_box(Box::from_center({6.0, 0.5}, 0.1, 0.1), prof);
  const KalmanState cr = clamp_to_roi(right, r);
  CHECK(cr.px() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(cr.py() == doctest::Approx(0.5));
  CHECK(point_in_polygon(cr.center(), r.quad));

  // beyond a corner
  KalmanState corner = KalmanState::from_box(Box::from_center({4.0, -3.0}, 0.1, 0.1), prof);
  const KalmanState cc = clamp_to_roi(corner, r);
  CHECK(cc.px() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(cc.py() == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(point_in_polygon(cc.center(), r.quad));
}

TEST_CASE("clamp_to_roi idempotence and containment on random draws") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 6.0);
  const Region r = square_region();
  ClassMotionProfile prof;
  for (int i = 0; i < 5000; ++i) {
    KalmanState s = KalmanState::from_box(Box::from_center({u(rng), u(rng)}, 1, 1), prof);
    const KalmanState once = clamp_to_roi(s, r);
    const KalmanState twice = clamp_to_roi(once, r);
    CHECK(point_in_polygon(once.center(), r.quad));
    CHECK((twice.mean - once.mean).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(M_PI + 0.1) == doctest::Approx(-M_PI + 0.1));
}

TEST_CASE("map json round trip") {
  EnvironmentMap m;
  m.image_width = 1920;
  m.image_height = 1080;
  Region r = rect_region_2x1();
  r.kind = RegionKind::crosswalk;
  r.applicable_classes = {1};
  m.regions = {r};

  const EnvironmentMap back = parse_map(map_to_json(m));
  REQUIRE(back.regions.size() == 1);
  CHECK(back.image_width == doctest::Approx(1920));
  CHECK(back.regions[0].id == "rect");
  CHECK(back.regions[0].kind == RegionKind::crosswalk);
  CHECK(back.regions[0].entrance_edge == 0);
  CHECK(back.regions[0].exit_edge == 2);
  CHECK(back.regions[0].applicable_classes == std::set<int>{1});
  for (int i = 0; i < 4; ++i)
    CHECK((back.regions[0].quad.vertices[static_cast<size_t>(i)] -
           r.quad.vertices[static_cast<size_t>(i)])
              .norm() == doctest::Approx(0.0));
}

TEST_CASE("parse_map defaults and validation") {
  // crosswalk with no class list defaults to pedestrians; roads to vehicles
  const std::string doc = R"({
    "image_width": 100, "image_height": 100,
    "regions": [
      {"id": "cw", "kind": "crosswalk",
       "vertices": [[0,0],[10,0],[10,10],[0,10]],
       "entrance_edge": 0, "exit_edge": 2},
      {"id": "rd", "kind": "one_way_road",
       "vertices": [[20,0],[40,0],[40,10],[20,10]],
       "entrance_edge": 3, "exit_edge": 1}
    ]})";
  const EnvironmentMap m = parse_map(doc);
  CHECK(m.regions[0].applicable_classes == std::set<int>{1});
  CHECK(m.regions[1].applicable_classes == std::set<int>{2, 3, 4, 5});

  CHECK_THROWS_AS(parse_map(R"({"regions": [{"id": "x", "kind": "crosswalk",
      "vertices": [[0,0],[1,0],[1,1]], "entrance_edge": 0, "exit_edge": 2}]})"),
                  ValidationError);
}
