#include <doctest.h>

#include "test_util.hpp"
#include "valvecav/nosw.hpp"
#include "valvecav/random.hpp"

using namespace valvecav;

namespace {
SignalRecord ramp(const std::string& id, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return make_record(id, std::move(x), 100.0, 6, 50, FlowState::kConstantCavitation);
}
}  // namespace

TEST_CASE("window counts at full signal length") {
  CHECK(window_count(4687500, 2334720) == 2);
  CHECK(window_count(4687500, 466944) == 10);
  CHECK(window_count(4687500, 4687500) == 1);
}

TEST_CASE("segment_signal tiles from index 0 and drops the remainder") {
  const auto r = ramp("a", 23);
  const auto segs = segment_signal(r, 5, Partition::kTest);
  REQUIRE(segs.size() == 4);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].window_index == i);
    CHECK(segs[i].samples().size() == 5);
    CHECK(segs[i].samples()[0] == static_cast<double>(5 * i));
    CHECK(segs[i].partition == Partition::kTest);
    CHECK(segs[i].upstream_pressure == 6);
    CHECK(segs[i].label == FlowState::kConstantCavitation);
  }
  // identity case
  const auto whole = segment_signal(r, 23);
  REQUIRE(whole.size() == 1);
  CHECK(std::vector<double>(whole[0].samples().begin(), whole[0].samples().end()) == *r.samples);
  CHECK_THROWS_AS(segment_signal(r, 0), ConfigError);
  CHECK_THROWS_AS(segment_signal(r, 24), ConfigError);
}

TEST_CASE("segments are disjoint and concatenate to the covered prefix") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(500);
    const std::size_t w = 1 + rng.below(n);
    const auto r = ramp("p", n);
    const auto segs = segment_signal(r, w);
    CHECK(segs.size() == n / w);
    std::vector<double> joined;
    for (const auto& s : segs) joined.insert(joined.end(), s.samples().begin(), s.samples().end());
    REQUIRE(joined.size() == segs.size() * w);
    for (std::size_t i = 0; i < joined.size(); ++i) CHECK(joined[i] == static_cast<double>(i));
  }
}

TEST_CASE("segment_dataset partitions follow the parent record") {
  std::vector<SignalRecord> records = {ramp("a", 20), ramp("b", 20), ramp("c", 7)};
  SplitAssignment split;
  split.partition = {{"a", Partition::kTrain}, {"b", Partition::kTest}, {"c", Partition::kTrain}};
  const auto ds = segment_dataset(records, split, 7);
  CHECK(ds.train.size() == 2 + 1);
  CHECK(ds.test.size() == 2);
  for (const auto& s : ds.test) CHECK(s.parent_id == "b");
  for (const auto& s : ds.train) CHECK(s.partition == Partition::kTrain);
  SplitAssignment partial;
  partial.partition = {{"a", Partition::kTrain}};
  CHECK_THROWS_AS(segment_dataset(records, partial, 7), DataError);
}

TEST_CASE("count_windows reproduces every reference window row") {
  std::vector<SignalHeader> headers;
  SplitAssignment split;
  for (int i = 0; i < 356; ++i) {
    const std::string id = "s" + std::to_string(i);
    headers.push_back({id, 4687500, 10, 100, FlowState::kTurbulentFlow});
    split.partition[id] = i < 284 ? Partition::kTrain : Partition::kTest;
  }
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> table = {
      {2334720, 568, 144}, {1556480, 852, 216}, {1167360, 1136, 288},
      {933888, 1420, 360}, {778240, 1704, 432}, {667062, 1988, 504},
      {583680, 2272, 576}, {518825, 2556, 648}, {466944, 2840, 720}};
  for (auto [w, tr, te] : table) {
    const auto c = count_windows(headers, split, w);
    CHECK(c.train == tr);
    CHECK(c.test == te);
  }
}

TEST_CASE("segment files round trip through the index") {
  const auto dir = testutil::scratch_dir("segments");
  std::vector<double> x = {0.5, 1.5, -2.0, 4.0, 8.0, 16.0, 0.25};
  const auto r = make_record("rec", x, 1000.0, 9, 75, FlowState::kNoFlow);
  const auto segs = segment_signal(r, 3, Partition::kTrain);
  const auto index = write_segments(dir, segs);
  const auto back = read_segment_index(index);
  REQUIRE(back.size() == 2);
  CHECK(back[1].window_index == 1);
  CHECK(back[1].samples()[2] == 16.0);
  CHECK(back[0].sample_rate == 1000.0);
  CHECK(back[0].partition == Partition::kTrain);
  CHECK(back[0].valve_opening == 75);
}
