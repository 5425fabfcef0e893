#include <doctest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "valvecav/features.hpp"

using namespace valvecav;

namespace {

void check_against_oracle(const std::vector<double>& x, double tol) {
  const auto f = extract_features(x);
  const auto o = oracle::direct_stats(x);
  const std::array<double, 15> want = {o.mean, o.median, o.q1, o.q3, o.min, o.max, o.iqr, o.std,
                                       o.rms, o.sra, o.kurtosis, o.skewness, o.shape, o.clearance, o.crest};
  const auto got = f.values();
  for (std::size_t i = 0; i < 15; ++i) {
    INFO(kBaseFeatureNames[i]);
    CHECK(oracle::rel_err(got[i], want[i]) < tol);
  }
}

}  // namespace

TEST_CASE("five-point example") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const auto f = extract_features(x);
  CHECK(f.mean == 3.0);
  CHECK(f.median == 3.0);
  CHECK(f.q1 == 2.0);
  CHECK(f.q3 == 4.0);
  CHECK(f.iqr == 2.0);
  CHECK(f.std == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.rms == doctest::Approx(std::sqrt(11.0)));
  CHECK(f.skewness == doctest::Approx(0.0));
  CHECK(f.kurtosis == doctest::Approx(1.7));
  CHECK(f.crest_factor == doctest::Approx(5.0 / std::sqrt(11.0)));
  CHECK_FALSE(f.degenerate);
}

TEST_CASE("quartiles average neighbours when n*p is whole") {
  const std::vector<double> s = {1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(quantile_sorted(s, 0.25) == 2.5);
  CHECK(quantile_sorted(s, 0.5) == 4.5);
  CHECK(quantile_sorted(s, 0.75) == 6.5);
}

TEST_CASE("constant input is flagged degenerate") {
  const std::vector<double> x = {2, 2, 2, 2};
  const auto f = extract_features(x);
  CHECK(f.degenerate);
  CHECK(f.std == 0.0);
  CHECK(f.kurtosis == 0.0);
  CHECK(f.skewness == 0.0);
  CHECK(f.iqr == 0.0);
  CHECK(f.shape_factor == doctest::Approx(1.0));
  CHECK(f.crest_factor == doctest::Approx(1.0));
  CHECK(f.clearance_factor == doctest::Approx(1.0));
}

TEST_CASE("all-zero input gets unit shape ratios") {
  const auto f = extract_features(std::vector<double>(6, 0.0));
  CHECK(f.degenerate);
  CHECK(f.shape_factor == 1.0);
  CHECK(f.clearance_factor == 1.0);
  CHECK(f.crest_factor == 1.0);
  for (double v : f.values()) CHECK(std::isfinite(v));
}

TEST_CASE("feature extraction errors") {
  CHECK_THROWS_AS(extract_features(std::vector<double>{1, 2, 3}), NumericError);
  CHECK_THROWS_AS(extract_features(std::vector<double>{1, 2, INFINITY, 3}), NumericError);
}

TEST_CASE("features match the direct-formula oracle") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 4 + rng.below(300);
    std::vector<double> x(n);
    for (auto& v : x) v = -std::log(1.0 - rng.uniform()) * (1 + 10 * rng.uniform());
    check_against_oracle(x, 1e-12);
  }
}

TEST_CASE("scale properties") {
  Rng rng(6);
  std::vector<double> x(128);
  for (auto& v : x) v = std::fabs(rng.normal()) + 0.1;
  const double c = 3.7;
  std::vector<double> y = x;
  for (auto& v : y) v *= c;
  const auto fx = extract_features(x).values();
  const auto fy = extract_features(y).values();
  for (std::size_t i = 0; i < 15; ++i) {
    INFO(kBaseFeatureNames[i]);
    const double expect = i < 10 ? c * fx[i] : fx[i];
    CHECK(oracle::rel_err(fy[i], expect) < 1e-9);
  }
}

TEST_CASE("feature table bookkeeping and CSV round trip") {
  std::vector<FeatureVector> vs;
  Rng rng(8);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> x(16);
    for (auto& v : x) v = rng.uniform();
    auto f = extract_features(x);
    f.meta.parent_id = i % 2 ? "b" : "a";
    f.meta.window_index = static_cast<std::size_t>(2 - i / 2);
    f.meta.partition = i % 2 ? Partition::kTest : Partition::kTrain;
    f.meta.upstream_pressure = 6;
    f.meta.valve_opening = 25;
    f.meta.label = FlowState::kIncipientCavitation;
    vs.push_back(f);
  }
  vs.push_back(extract_features(std::vector<double>(4, 0.0)));
  vs.back().meta.parent_id = "c";
  const auto table = build_feature_table(vs);
  CHECK(table.num_rows() == 7);
  CHECK(table.num_cols() == 15);
  CHECK(table.meta(0).parent_id == "a");
  CHECK(table.meta(0).window_index == 0);
  CHECK(table.meta(3).parent_id == "b");
  CHECK(table.meta(6).degenerate);
  CHECK(table.filter(Partition::kTest).num_rows() == 3);

  const auto dir = testutil::scratch_dir("feature_csv");
  write_feature_table(dir / "f.csv", table);
  const auto back = read_feature_table(dir / "f.csv");
  REQUIRE(back.num_rows() == table.num_rows());
  CHECK(back.columns() == table.columns());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    CHECK(back.meta(r).parent_id == table.meta(r).parent_id);
    CHECK(back.meta(r).partition == table.meta(r).partition);
    CHECK(back.meta(r).degenerate == table.meta(r).degenerate);
    for (std::size_t c = 0; c < table.num_cols(); ++c) CHECK(back.at(r, c) == table.at(r, c));
  }
  CHECK(feature_table_csv(back) == feature_table_csv(table));

  auto dup = vs;
  dup.push_back(vs[0]);
  CHECK_THROWS_AS(build_feature_table(dup), DataError);
}

TEST_CASE("table column operations") {
  FeatureTable t({"a", "b"});
  RowMeta m;
  t.add_row(m, std::vector<double>{1, 2});
  t.add_row(m, std::vector<double>{3, 4});
  const std::vector<std::string> names = {"c"};
  const std::vector<std::vector<double>> data = {{5, 6}};
  t.append_columns(names, data);
  CHECK(t.at(1, 2) == 6);
  CHECK(t.column("b") == std::vector<double>{2, 4});
  const std::vector<std::string> pick = {"c", "a"};
  const auto s = t.select_columns(pick);
  CHECK(s.at(0, 0) == 5);
  CHECK(s.at(0, 1) == 1);
  CHECK_THROWS_AS(t.append_columns(names, data), DataError);
  CHECK_THROWS_AS(t.add_row(m, std::vector<double>{1, NAN, 2}), NumericError);
  CHECK_THROWS_AS(t.column("zz"), DataError);
}
