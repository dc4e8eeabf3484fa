#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "resil/empirical.hpp"
#include "resil/errors.hpp"

using namespace resil;
using namespace resil::empirical;

namespace {

// Three outages at 0, 1, 2 h restoring at 5, 3, 4 h: the second outage is
// restored first, then the third, then the first.
constexpr const char* three_outages =
    "component_id,outage_time,restore_time,quantity\n"
    "line-1,0,5,1\n"
    "line-2,1,3,1\n"
    "line-3,2,4,1\n";

EmpiricalEvent parse(const std::string& text) {
  std::istringstream in(text);
  return load_event(in);
}

EmpiricalEvent random_event(std::mt19937_64& rng, bool equal_quantities) {
  std::uniform_int_distribution<int> size(1, 50);
  std::uniform_real_distribution<double> time(0.0, 48.0);
  std::exponential_distribution<double> repair(0.2);
  std::uniform_real_distribution<double> quantity(0.5, 5000.0);
  const double shared = quantity(rng);
  std::vector<OutageRecord> records;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) {
    OutageRecord r;
    r.component_id = "c" + std::to_string(i);
    r.outage_time = time(rng);
    // Occasional instant repairs and coincident times.
    r.restore_time = i % 7 == 3 ? r.outage_time : r.outage_time + repair(rng);
    if (i % 11 == 5 && !records.empty()) {
      r.outage_time = records.back().outage_time;
      r.restore_time = std::max(r.restore_time, r.outage_time);
    }
    r.quantity = equal_quantities ? shared : quantity(rng);
    records.push_back(r);
  }
  return EmpiricalEvent(records);
}

}  // namespace

TEST_CASE("load_event builds the restore permutation") {
  const auto e = parse(three_outages);
  REQUIRE(e.size() == 3);
  CHECK(e.outage_times() == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(e.restore_times() == std::vector<double>{3.0, 4.0, 5.0});
  // Restores in time order come from outages 2, 3, 1 (zero-based 1, 2, 0).
  CHECK(e.restore_order() == std::vector<std::size_t>{1, 2, 0});
  // Inverse: outage 1 is the third restore, outage 2 the first, outage 3 the second.
  CHECK(e.restore_rank() == std::vector<std::size_t>{2, 0, 1});
  CHECK(e.total_quantity() == 3.0);
}

TEST_CASE("load_event accepts a missing quantity column and blank lines") {
  const auto e = parse("component_id,outage_time,restore_time\nA,0,2\n\n");
  REQUIRE(e.size() == 1);
  CHECK(e.records()[0].quantity == 1.0);

  const auto reordered = parse("restore_time,component_id,quantity,outage_time\r\n4,\"x\",2,1\r\n");
  CHECK(reordered.records()[0].component_id == "x");
  CHECK(reordered.records()[0].outage_time == 1.0);
  CHECK(reordered.records()[0].quantity == 2.0);

  const auto empty_quantity = parse("component_id,outage_time,restore_time,quantity\nA,0,2,\n");
  CHECK(empty_quantity.records()[0].quantity == 1.0);
}

TEST_CASE("load_event errors") {
  SUBCASE("restore before outage names the component") {
    try {
      parse("component_id,outage_time,restore_time\nok,0,1\nbad-line,3,2\n");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "bad-line");
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("malformed number carries the line number") {
    try {
      parse("component_id,outage_time,restore_time\nok,0,1\nx,abc,2\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("wrong field count") {
    CHECK_THROWS_AS(parse("component_id,outage_time,restore_time\nx,1\n"), ParseError);
  }
  SUBCASE("missing header column") {
    CHECK_THROWS_AS(parse("component_id,outage_time\nx,1\n"), ParseError);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(parse(""), ValidationError);
    CHECK_THROWS_AS(parse("component_id,outage_time,restore_time\n"), ValidationError);
  }
  SUBCASE("nonpositive quantity") {
    CHECK_THROWS_AS(parse("component_id,outage_time,restore_time,quantity\nx,0,1,0\n"), ValidationError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_event_file("/nonexistent/event.csv"), std::ios_base::failure);
  }
}

TEST_CASE("step curves of a single outage") {
  const auto e = EmpiricalEvent({{"a", 0.0, 2.0, 5.0}});
  const auto c = step_curves(e);
  CHECK(c.performance.value_at(-1.0) == 0.0);
  CHECK(c.performance.value_at(0.0) == -5.0);
  CHECK(c.performance.value_at(1.999) == -5.0);
  CHECK(c.performance.value_at(2.0) == 0.0);
  CHECK(c.performance.value_at(9.0) == 0.0);
}

TEST_CASE("step curves of the three-outage example") {
  const auto c = step_curves(parse(three_outages));
  using BP = std::vector<std::pair<double, double>>;
  CHECK(c.outages.breakpoints == BP{{0, 1}, {1, 2}, {2, 3}});
  CHECK(c.restores.breakpoints == BP{{3, 1}, {4, 2}, {5, 3}});
  CHECK(c.performance.breakpoints == BP{{0, -1}, {1, -2}, {2, -3}, {3, -2}, {4, -1}, {5, 0}});
  CHECK(c.performance.value_at(2.5) == -3.0);
}

TEST_CASE("coincident jumps share a breakpoint") {
  // b goes out at the instant a is restored.
  const auto e = EmpiricalEvent({{"a", 0.0, 1.0, 2.0}, {"b", 1.0, 3.0, 2.0}});
  const auto c = step_curves(e);
  using BP = std::vector<std::pair<double, double>>;
  CHECK(c.performance.breakpoints == BP{{0, -2}, {1, -2}, {3, 0}});
  CHECK(empirical_metrics(e).nadir == 2.0);
}

TEST_CASE("area formulas on small examples") {
  const auto two = EmpiricalEvent({{"a", 0.0, 2.0, 1.0}, {"b", 1.0, 3.0, 1.0}});
  CHECK(area_pairwise(two) == 4.0);
  CHECK(area_repair(two) == 4.0);

  const auto single = EmpiricalEvent({{"a", 1.0, 4.0, 2.0}});
  CHECK(area_pairwise(single) == 6.0);
  CHECK(area_repair(single) == 6.0);

  const auto e = parse(three_outages);
  CHECK(area_pairwise(e) == 9.0);
  // Repair times in outage order: 5 - 0, 3 - 1, 4 - 2.
  CHECK(area_repair(e) == 5.0 + 2.0 + 2.0);
  CHECK(area_uniform(e, 1.0) == 9.0);
  CHECK(area_uniform(e, 2.0) == 18.0);
  CHECK_THROWS_AS(area_uniform(e, 0.0), DomainError);

  const auto instant = EmpiricalEvent({{"a", 1.0, 1.0, 3.0}, {"b", 2.0, 2.0, 1.0}});
  CHECK(area_repair(instant) == 0.0);
  CHECK(area_pairwise(instant) == 0.0);
}

TEST_CASE("empirical metrics") {
  const auto r = empirical_metrics(parse(three_outages));
  CHECK(r.area == 9.0);
  CHECK(r.area_pairwise == 9.0);
  CHECK(r.nadir == 3.0);
  CHECK(r.nadir_time == 2.0);
  CHECK(r.duration == 5.0);
  CHECK(r.mean_repair_time == 3.0);

  const auto single = empirical_metrics(EmpiricalEvent({{"a", 0.0, 2.0, 5.0}}));
  CHECK(single.area == 10.0);
  CHECK(single.nadir == 5.0);
  CHECK(single.duration == 2.0);

  const auto disjoint = empirical_metrics(EmpiricalEvent({{"a", 0.0, 1.0, 1.0}, {"b", 3.0, 4.0, 1.0}}));
  CHECK(disjoint.nadir == 1.0);
  CHECK(disjoint.nadir_time == 0.0);
}

TEST_CASE("area identities over random events") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 500; ++trial) {
    const bool equal = trial % 2 == 0;
    const auto e = random_event(rng, equal);
    const double pairwise = area_pairwise(e);
    const double repair = area_repair(e);
    const double scale = std::max(1.0, std::abs(repair));
    CHECK(std::abs(pairwise - repair) <= 1e-9 * scale);

    // Exact integral of -P over the event span.
    const auto c = step_curves(e);
    const double span_end = e.restore_times().back();
    CHECK(std::abs(-c.performance.integral(0.0, span_end + 1.0) - repair) <= 1e-9 * scale);

    if (equal) {
      CHECK(std::abs(area_uniform(e, e.records()[0].quantity) - pairwise) <= 1e-9 * scale);
    }

    // Reordering the summation of quantity-weighted restore times.
    std::vector<std::size_t> idx(e.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    long double shuffled = 0.0L;
    for (auto k : idx) {
      shuffled += static_cast<long double>(e.records()[e.restore_order()[k]].quantity) * e.restore_times()[k];
    }
    for (const auto& r : e.records()) {
      shuffled -= static_cast<long double>(r.quantity) * r.outage_time;
    }
    CHECK(std::abs(static_cast<double>(shuffled) - pairwise) <= 1e-9 * scale);

    // Curve shape.
    CHECK(c.performance.breakpoints.back().second == 0.0);
    CHECK(c.outages.breakpoints.back().second == doctest::Approx(e.total_quantity()).epsilon(1e-12));
    CHECK(c.restores.breakpoints.back().second == doctest::Approx(e.total_quantity()).epsilon(1e-12));
    for (std::size_t k = 1; k < c.outages.breakpoints.size(); ++k) {
      CHECK(c.outages.breakpoints[k].first > c.outages.breakpoints[k - 1].first);
      CHECK(c.outages.breakpoints[k].second >= c.outages.breakpoints[k - 1].second);
    }
    for (std::size_t k = 1; k < c.restores.breakpoints.size(); ++k) {
      CHECK(c.restores.breakpoints[k].second >= c.restores.breakpoints[k - 1].second);
    }
  }
}
