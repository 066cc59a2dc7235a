#include <set>
#include <sstream>

#include <doctest.h>

#include "properties.hpp"
#include "pmuguard/detector.hpp"
#include "pmuguard/error.hpp"

using namespace pmuguard;

namespace {

data::LabeledDataset small_dataset() {
    data::LabeledDataset ds;
    ds.time_tags = {0.0, 0.02, 0.04, 0.06};
    ds.features = grid::Matrix::Zero(4, 5);
    ds.labels = LabelMatrix::Zero(4, 5);
    ds.labels(1, 1) = 1;
    ds.labels(1, 4) = 1;
    ds.labels(2, 1) = 1;
    ds.sources = {{"t", 0}};
    ds.row_source.assign(4, 0);
    return ds;
}

}  // namespace

TEST_CASE("normalize: step at alpha, boundary maps to 1") {
    const std::vector<double> y{0.7, 0.5, 0.49, 0.0, 1.0};
    CHECK(detect::normalize(y, {0.5}) == std::vector<std::uint8_t>{1, 1, 0, 0, 1});
    const std::vector<double> at{0.37};
    CHECK(detect::normalize(at, {0.37})[0] == 1);
    CHECK_THROWS_AS(detect::normalize(y, {0.0}), ConfigError);
    CHECK_THROWS_AS(detect::normalize(y, {1.0}), ConfigError);
}

TEST_CASE("normalize: idempotence and monotonicity on the grid") {
    const auto r = props::check_normalizer_grid();
    CHECK(r.pairs == 10000);
    CHECK(r.failures == 0);
}

TEST_CASE("localize reports attacked PMUs in order") {
    CHECK(detect::localize(std::vector<std::uint8_t>{0, 0, 0, 0, 0}).empty());
    const auto two = detect::localize(std::vector<std::uint8_t>{0, 1, 0, 0, 1});
    CHECK(two == std::vector<std::size_t>{1, 4});
    CHECK(detect::format_attacked(two) == "PMU2, PMU5");
    CHECK(detect::format_attacked({}) == "none");
    CHECK(detect::localize(std::vector<std::uint8_t>{1, 1, 1, 1, 1}).size() == 5);
}

TEST_CASE("pipeline: a stub scoring 0.1 raises no alarm") {
    auto ds = small_dataset();
    const detect::Scorer stub = [](const mlp::Matrix& x) { return mlp::Matrix::Constant(x.rows(), x.cols(), 0.1); };
    const auto frames = detect::run_pipeline(stub, ds, {});
    REQUIRE(frames.size() == 4);
    for (const auto& f : frames) CHECK(f.attacked.empty());
}

TEST_CASE("pipeline: a stub echoing the labels reproduces them") {
    const auto ds = small_dataset();
    const detect::Scorer oracle_scorer = [&ds](const mlp::Matrix&) { return mlp::Matrix(ds.labels.cast<double>()); };
    const auto frames = detect::run_pipeline(oracle_scorer, ds, {0.5});
    CHECK(detect::verdict_matrix(frames) == ds.labels);
    CHECK(frames[1].attacked == std::vector<std::size_t>{1, 4});
    std::multiset<double> in(ds.time_tags.begin(), ds.time_tags.end()), out;
    for (const auto& f : frames) out.insert(f.time_tag);
    CHECK(in == out);
}

TEST_CASE("alarm intervals group consecutive flagged frames per PMU") {
    const auto ds = small_dataset();
    const detect::Scorer oracle_scorer = [&ds](const mlp::Matrix&) { return mlp::Matrix(ds.labels.cast<double>()); };
    const auto alarms = detect::alarm_intervals(detect::run_pipeline(oracle_scorer, ds, {}));
    REQUIRE(alarms.size() == 2);
    CHECK(alarms[0].pmu == 1);
    CHECK(alarms[0].start == 0.02);
    CHECK(alarms[0].end == 0.04);
    CHECK(alarms[1].pmu == 4);
    CHECK(alarms[1].start == alarms[1].end);
}

TEST_CASE("detection CSV layout") {
    const auto ds = small_dataset();
    const detect::Scorer half = [](const mlp::Matrix& x) { return mlp::Matrix::Constant(x.rows(), x.cols(), 0.5); };
    std::ostringstream out;
    detect::write_detection_csv(out, detect::run_pipeline(half, ds, {}));
    const auto s = out.str();
    CHECK(s.rfind("t,v1,v2,v3,v4,v5,raw1,raw2,raw3,raw4,raw5\n", 0) == 0);
    CHECK(s.find("\n0.02,1,1,1,1,1,0.5,0.5,0.5,0.5,0.5\n") != std::string::npos);
}

TEST_CASE("pipeline rejects a scorer of the wrong width") {
    const auto ds = small_dataset();
    const detect::Scorer narrow = [](const mlp::Matrix& x) { return mlp::Matrix::Zero(x.rows(), 3); };
    CHECK_THROWS_AS(detect::run_pipeline(narrow, ds, {}), DimensionError);
}
