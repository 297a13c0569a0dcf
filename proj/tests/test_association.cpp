#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fasttrack/association.hpp"
#include "oracles.hpp"

using namespace fasttrack;

namespace {

double total_cost(const Eigen::MatrixXd& costs, const AssociationResult& r) {
  double t = 0.0;
  for (const auto& [i, j] : r.matches) t += costs(i, j);
  return t;
}

}  // namespace

TEST_CASE("solve_assignment small instances") {
  Eigen::MatrixXd one(1, 1);
  one << 0.1;
  AssociationResult r = solve_assignment(one, 0.5);
  REQUIRE(r.matches.size() == 1);
  CHECK(r.matches[0] == std::pair<int, int>{0, 0});

  Eigen::MatrixXd two(2, 2);
  two << 0.1, 0.2, 0.2, 0.1;
  r = solve_assignment(two, 0.5);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0] == std::pair<int, int>{0, 0});
  CHECK(r.matches[1] == std::pair<int, int>{1, 1});
  CHECK(total_cost(two, r) == doctest::Approx(0.2));

  Eigen::MatrixXd gated(1, 1);
  gated << 0.9;
  r = solve_assignment(gated, 0.5);
  CHECK(r.matches.empty());
  CHECK(r.unmatched_rows == std::vector<int>{0});
  CHECK(r.unmatched_cols == std::vector<int>{0});
}

TEST_CASE("solve_assignment equals the permutation oracle") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const int r = dim(rng), c = dim(rng);
    Eigen::MatrixXd costs(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) costs(i, j) = u(rng);
    const AssociationResult ar = solve_assignment(costs, 2.0);  // no gating
    CHECK(total_cost(costs, ar) ==
          doctest::Approx(oracles::brute_force_min_cost(costs)).epsilon(1e-12));
    CHECK(static_cast<int>(ar.matches.size()) == std::min(r, c));
  }
}

TEST_CASE("gating monotonicity") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd costs(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) costs(i, j) = u(rng);
    size_t prev = 0;
    for (double gate : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1}) {
      const size_t n = solve_assignment(costs, gate).matches.size();
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("ties break toward the lowest row then column") {
  Eigen::MatrixXd costs(2, 2);
  costs << 0.5, 0.5, 0.5, 0.5;  // every assignment costs 1.0
  const AssociationResult r = solve_assignment(costs, 1.0);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0] == std::pair<int, int>{0, 0});
  CHECK(r.matches[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd costs(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) costs(i, j) = u(rng);
  const AssociationResult a = solve_assignment(costs, 0.8);
  const AssociationResult b = solve_assignment(costs, 0.8);
  CHECK(a.matches == b.matches);
  CHECK(a.unmatched_rows == b.unmatched_rows);
  CHECK(a.unmatched_cols == b.unmatched_cols);
}

TEST_CASE("rectangular matrices match the smaller side") {
  Eigen::MatrixXd wide(2, 4);
  wide << 0.9, 0.1, 0.9, 0.9,
          0.9, 0.9, 0.9, 0.1;
  AssociationResult r = solve_assignment(wide, 0.5);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0] == std::pair<int, int>{0, 1});
  CHECK(r.matches[1] == std::pair<int, int>{1, 3});
  CHECK(r.unmatched_cols == std::vector<int>{0, 2});

  Eigen::MatrixXd tall = wide.transpose();
  r = solve_assignment(tall, 0.5);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.matches[0] == std::pair<int, int>{1, 0});
  CHECK(r.matches[1] == std::pair<int, int>{3, 1});
}

TEST_CASE("associate gates by IoU and class") {
  const Box b{0, 0, 10, 10};
  std::vector<ClassedBox> tracks{{b, 1}};
  std::vector<ClassedBox> dets{{b, 1}};
  AssociationResult r = associate(tracks, dets, 0.5);
  REQUIRE(r.matches.size() == 1);
  CHECK(r.matches[0] == std::pair<int, int>{0, 0});

  dets[0].class_id = 2;  // same geometry, different class
  r = associate(tracks, dets, 0.5);
  CHECK(r.matches.empty());
  CHECK(r.unmatched_rows == std::vector<int>{0});
  CHECK(r.unmatched_cols == std::vector<int>{0});
}

TEST_CASE("associate recovers the optimal diagonal") {
  // three track/detection pairs with diagonal IoUs {0.9, 0.6, 0.55} and
  // weaker off-diagonal overlap; the oracle confirms the diagonal is optimal
  std::vector<ClassedBox> tracks{{{0, 0, 10, 10}, 1},
                                 {{100, 0, 10, 10}, 1},
                                 {{200, 0, 10, 10}, 1}};
  auto shifted = [](const Box& b, double iou_target) {
    // axis shift d gives IoU (10-d)/(10+d); solve for d
    const double d = 10.0 * (1.0 - iou_target) / (1.0 + iou_target);
    return Box{b.left + d, b.top, b.width, b.height};
  };
  std::vector<ClassedBox> dets{{shifted(tracks[0].box, 0.9), 1},
                               {shifted(tracks[1].box, 0.6), 1},
                               {shifted(tracks[2].box, 0.55), 1}};
  const Eigen::MatrixXd costs = iou_cost_matrix(tracks, dets);
  const AssociationResult r = associate(tracks, dets, 0.5);
  REQUIRE(r.matches.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r.matches[static_cast<size_t>(i)].second == i);
  CHECK(total_cost(costs, r) ==
        doctest::Approx(oracles::brute_force_min_cost(costs)).epsilon(1e-12));
}
