#include <doctest.h>

#include <cmath>

#include "sugam/rng.hpp"
#include "sugam/table.hpp"
#include "test_helpers.hpp"

using namespace sugam;

TEST_CASE("standardize centers and scales, and re-applying is bitwise") {
  Rng rng(31);
  Vector x(101);
  for (Index i = 0; i < x.size(); ++i) x[i] = 5.0 + 3.0 * rng.normal();
  const StandardizeResult res = standardize(x, "x");
  CHECK(is_standardized(res.values));
  // the output is literally apply_standardization, entry by entry
  for (Index i = 0; i < x.size(); ++i) {
    CHECK(res.values[i] == apply_standardization(x[i], res.stats));
  }
  const Vector again = apply_standardization(x, res.stats);
  CHECK(bit_equal(again, res.values));

  Vector flat = Vector::Constant(10, 3.0);
  CHECK_THROWS_WITH_AS(standardize(flat, "flat"), doctest::Contains("flat"), UserError);
}

namespace {

SlopeUnitTable tiny_table() {
  SlopeUnitTable t;
  t.su_ids = {2, 5, 9};
  t.labels = IndexVector::Zero(3);
  t.labels[1] = 1;
  t.data.resize(3, 0);
  Vector a(3), b(3);
  a << 1.5, -2.25, 0.5;
  b << 10.0, 20.0, 12.5;
  t.add_column("Slope_mu", a);
  t.add_column("Elev_mu", b);
  return t;
}

}  // namespace

TEST_CASE("su table serializes and parses losslessly") {
  const SlopeUnitTable t = tiny_table();
  const std::string csv = serialize_su_table(t);
  CHECK(csv.substr(0, csv.find('\n')) == "su_id,label,Slope_mu,Elev_mu");
  const SlopeUnitTable back = parse_su_table(csv, "t");
  CHECK(back.su_ids == t.su_ids);
  CHECK(bit_equal(back.labels, t.labels));
  CHECK(back.columns == t.columns);
  CHECK(bit_equal(back.data, t.data));
  // and the round trip is a fixed point
  CHECK(serialize_su_table(back) == csv);
}

TEST_CASE("su table parser validates structure") {
  CHECK_THROWS_AS(parse_su_table("su_id,label,x\n1,2,3\n", "t"), UserError);  // label 2
  CHECK_THROWS_AS(parse_su_table("id,label,x\n1,1,3\n", "t"), UserError);     // header
  CHECK_THROWS_AS(parse_su_table("su_id,label,x\n1,1\n", "t"), UserError);    // arity
  CHECK_THROWS_AS(parse_su_table("su_id,label,x\n2,0,1\n1,0,1\n", "t"),
                  UserError);  // ids must increase
  CHECK_THROWS_AS(parse_su_table("su_id,label,x\n0,0,1\n", "t"), UserError);
  const auto t = parse_su_table("su_id,label\n4,1\n", "t");
  CHECK(t.n() == 1);
  CHECK(t.columns.empty());
}

TEST_CASE("column access errors name the column") {
  const SlopeUnitTable t = tiny_table();
  CHECK(t.has_column("Slope_mu"));
  CHECK_FALSE(t.has_column("nope"));
  CHECK_THROWS_WITH_AS(t.col("nope"), doctest::Contains("nope"), UserError);
  CHECK(t.column("Elev_mu")[2] == 12.5);
}

TEST_CASE("standardization map round-trips through json") {
  StandardizationMap m;
  m["Slope_mu"] = {27.125, 9.5};
  m["PGA_mu"] = {0.22, 0.065};
  const std::string text = serialize_standardization(m);
  const StandardizationMap back = parse_standardization(text, "s");
  REQUIRE(back.size() == 2);
  CHECK(back.at("Slope_mu").mean == 27.125);
  CHECK(back.at("Slope_mu").sd == 9.5);
  CHECK(back.at("PGA_mu").mean == 0.22);
  CHECK(serialize_standardization(back) == text);
  CHECK_THROWS_AS(parse_standardization("{\"columns\":0}", "s"), UserError);
  CHECK_THROWS_AS(parse_standardization("not json", "s"), UserError);
}
