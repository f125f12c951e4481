#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sugam/bedding.hpp"
#include "sugam/grid.hpp"
#include "sugam/rng.hpp"
#include "sugam/stats.hpp"
#include "sugam/zonal.hpp"

using namespace sugam;

namespace {

IntGrid partition_2x3() {
  IntGrid g;
  g.xllcorner = 0;
  g.yllcorner = 0;
  g.cellsize = 1;
  g.nodata = -9999;
  g.values.resize(2, 3);
  g.values << 1, 1, 2, 1, 2, -9999;
  return g;
}

}  // namespace

TEST_CASE("zonal mean and sd with nodata holes") {
  const IntGrid part_grid = partition_2x3();
  const SuPartition part = SuPartition::from_grid(part_grid);
  CHECK(part.ids == std::vector<int>{1, 2});

  DoubleGrid vals;
  vals.xllcorner = 0;
  vals.yllcorner = 0;
  vals.cellsize = 1;
  vals.nodata = -9999;
  vals.values.resize(2, 3);
  vals.values << 2.0, 4.0, 10.0, 6.0, 14.0, 99.0;  // 99 sits on partition nodata

  const Vector mu = aggregate_to_su(vals, part, ZonalStat::kMean);
  CHECK(mu[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(mu[1] == doctest::Approx(12.0).epsilon(1e-15));
  const Vector sd = aggregate_to_su(vals, part, ZonalStat::kSd);
  CHECK(sd[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sd[1] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

  // value nodata inside an SU is skipped
  DoubleGrid holed = vals;
  holed.values(0, 0) = holed.nodata;
  const Vector mu2 = aggregate_to_su(holed, part, ZonalStat::kMean);
  CHECK(mu2[0] == doctest::Approx(5.0).epsilon(1e-15));

  // an SU left with a single cell cannot report a spread
  DoubleGrid thin = vals;
  thin.values(0, 2) = thin.nodata;
  CHECK_THROWS_WITH_AS(aggregate_to_su(thin, part, ZonalStat::kSd),
                       doctest::Contains("2"), UserError);
}

TEST_CASE("zonal sums are invariant to cell order") {
  // sorted summation: any traversal of equal multisets gives equal bits
  Rng rng(9);
  std::vector<double> cells;
  for (int i = 0; i < 257; ++i) cells.push_back((rng.uniform() - 0.5) * 1e6);
  std::vector<double> shuffled = cells;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.uniform_int(i)]);
  }
  CHECK(sorted_sum(cells) == sorted_sum(shuffled));
}

TEST_CASE("majority class breaks ties at the lowest code") {
  IntGrid part_grid = partition_2x3();
  const SuPartition part = SuPartition::from_grid(part_grid);
  IntGrid classes = part_grid;
  classes.values << 7, 3, 5, 3, 5, -9999;  // SU 1: {7,3,3} -> 3; SU 2: {5,5} -> 5
  auto m = majority_class(classes, part);
  CHECK(m == std::vector<int>{3, 5});
  classes.values << 7, 3, 5, 3, 9, -9999;
  classes.values(0, 0) = 9;  // SU 1: {9,3,3} -> 3; SU 2 tie {5,9} -> 5
  m = majority_class(classes, part);
  CHECK(m == std::vector<int>{3, 5});
}

TEST_CASE("partition rejects non-positive ids") {
  IntGrid g = partition_2x3();
  g.values(0, 0) = 0;
  CHECK_THROWS_AS(SuPartition::from_grid(g), UserError);
  IntGrid empty = partition_2x3();
  empty.values.setConstant(empty.nodata);
  CHECK_THROWS_AS(SuPartition::from_grid(empty), UserError);
}

TEST_CASE("centroid labeling marks the containing SU and reports drops") {
  const SuPartition part = SuPartition::from_grid(partition_2x3());
  std::vector<Centroid> pts;
  pts.push_back({0.5, 1.5});   // cell (0,0): SU 1
  pts.push_back({2.5, 0.2});   // cell (1,2): partition nodata -> dropped
  pts.push_back({9.0, 9.0});   // outside -> dropped
  const LabelResult res = label_su(pts, part);
  CHECK(res.labels[0] == 1);
  CHECK(res.labels[1] == 0);
  CHECK(res.dropped == 2);
  CHECK_FALSE(res.empty_input);

  const LabelResult none = label_su({}, part);
  CHECK(none.empty_input);
  CHECK(none.labels.sum() == 0);
}

TEST_CASE("centroid csv wants x,y header") {
  const auto pts = parse_centroids_csv("x,y,landslide_id\n1.5,2.5,7\n", "c");
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].x == 1.5);
  CHECK(pts[0].y == 2.5);
  const auto bare = parse_centroids_csv("x,y\n1,2\n3,4\n", "c");
  CHECK(bare.size() == 2);
  CHECK_THROWS_AS(parse_centroids_csv("lon,lat\n1,2\n", "c"), UserError);
  CHECK_THROWS_AS(parse_centroids_csv("x,y\n1\n", "c"), UserError);
}

TEST_CASE("bedding worked examples") {
  // aspect 90, dip direction 0: difference 90 -> B1
  CHECK(classify_bedding(90.0, 0.0) == 1);
  // aspect 0, dip direction 0: difference 0 -> B4
  CHECK(classify_bedding(0.0, 0.0) == 4);
  // aspect 200, dip direction 20: difference 180 -> B2
  CHECK(classify_bedding(200.0, 20.0) == 2);
  CHECK(bedding_name(1) == "B1");
  CHECK(bedding_name(5) == "B5");
}

TEST_CASE("bedding boundary membership is closed on the left") {
  CHECK(classify_bedding(0.0, 0.0) == 4);     // |d| = 0
  CHECK(classify_bedding(30.0, 0.0) == 5);    // 30 belongs to [30,60)
  CHECK(classify_bedding(60.0, 0.0) == 1);    // 60 belongs to [60,120)
  CHECK(classify_bedding(120.0, 0.0) == 3);
  CHECK(classify_bedding(150.0, 0.0) == 2);
  CHECK(classify_bedding(210.0, 0.0) == 3);
  CHECK(classify_bedding(240.0, 0.0) == 1);
  CHECK(classify_bedding(300.0, 0.0) == 5);
  CHECK(classify_bedding(330.0, 0.0) == 4);
  CHECK(classify_bedding(359.999, 0.0) == 4);
}

TEST_CASE("bedding properties: totality, symmetry, offset invariance") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const double asp = rng.uniform() * 360.0;
    const double dip = rng.uniform() * 360.0;
    const int b = classify_bedding(asp, dip);
    REQUIRE(b >= 1);
    REQUIRE(b <= 5);
    // |asp - dip| is symmetric in its arguments
    CHECK(classify_bedding(dip, asp) == b);
  }
  CHECK_THROWS_AS(classify_bedding(360.0, 0.0), UserError);
  CHECK_THROWS_AS(classify_bedding(-0.001, 0.0), UserError);
  CHECK_THROWS_AS(classify_bedding(0.0, 400.0), UserError);
}
