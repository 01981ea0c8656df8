#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "apnlc/error.hpp"
#include "apnlc/labels.hpp"
#include "apnlc/rng.hpp"

using namespace apnlc;

TEST_CASE("assignment solver matches brute force over all 4x4 permutations") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> cost(16);
    for (auto& c : cost) c = rng.uniform();
    std::vector<std::size_t> perm = {0, 1, 2, 3};
    double best = std::numeric_limits<double>::infinity();
    do {
      double t = 0.0;
      for (std::size_t i = 0; i < 4; ++i) t += cost[i * 4 + perm[i]];
      best = std::min(best, t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto got = solve_assignment(cost, 4);
    double t = 0.0;
    for (std::size_t i = 0; i < 4; ++i) t += cost[i * 4 + got[i]];
    CHECK(t == doctest::Approx(best).epsilon(1e-12));
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3});
  }
}

TEST_CASE("labels recover the constellation under permutation and small rotation") {
  for (const Format f : {Format::QPSK, Format::QAM16}) {
    const Constellation c = constellation_points(f);
    const std::size_t n = c.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::rotate(perm.begin(), perm.begin() + 3, perm.end());
    ClusterModel m;
    for (std::size_t j = 0; j < n; ++j) m.centers.push_back(c.points[perm[j]] * std::polar(1.0, 1e-3));
    const LabelMap map = assign_labels(m, c);
    CHECK(map.center_to_point == perm);
  }
  ClusterModel small;
  small.centers = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(assign_labels(small, constellation_points(Format::QPSK)), Error);
}

TEST_CASE("every QPSK bijection is recovered exactly") {
  const Constellation c = constellation_points(Format::QPSK);
  std::vector<std::size_t> perm = {0, 1, 2, 3};
  int count = 0;
  do {
    ClusterModel m;
    for (auto p : perm) m.centers.push_back(c.points[p]);
    const LabelMap map = assign_labels(m, c);
    CHECK(map.center_to_point == perm);
    CHECK(map.total_cost == doctest::Approx(0.0));
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(count == 24);
}
