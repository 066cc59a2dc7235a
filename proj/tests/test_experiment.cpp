#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <doctest.h>

#include "pmuguard/error.hpp"
#include "pmuguard/experiment.hpp"
#include "pmuguard/text.hpp"

using namespace pmuguard;
namespace fs = std::filesystem;

namespace {

LabelMatrix pattern(Eigen::Index rows, Eigen::Index cols) {
    LabelMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = (i * 7 + j * 3) % 5 == 0;
    return m;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        for (const auto c : text::split(line, ',')) cells.emplace_back(c);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("derive_seed is a pure function that separates streams") {
    CHECK(eval::derive_seed(1, 0, 0) == eval::derive_seed(1, 0, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t i = 0; i < 50; ++i) seen.insert(eval::derive_seed(101, s, i));
    CHECK(seen.size() == 200);
}

TEST_CASE("detection percentage: direct counts") {
    const auto labels = pattern(10, 5);
    const auto perfect = eval::detection_percentage(labels, labels);
    CHECK(perfect.overall == 100.0);
    for (const double v : perfect.per_pmu) CHECK(v == 100.0);

    const LabelMatrix flipped = labels.unaryExpr([](std::uint8_t v) -> std::uint8_t { return v ? 0 : 1; });
    CHECK(eval::detection_percentage(flipped, labels).overall == 0.0);

    LabelMatrix two_wrong = labels;
    two_wrong(2, 0) ^= 1;
    two_wrong(6, 0) ^= 1;
    const auto s = eval::detection_percentage(two_wrong, labels);
    CHECK(s.per_pmu[0] == doctest::Approx(80.0));
    CHECK(s.per_pmu[1] == 100.0);
    CHECK(s.overall == doctest::Approx(100.0 * 48.0 / 50.0));
    CHECK_THROWS_AS(eval::detection_percentage(labels, pattern(10, 4)), DimensionError);
}

TEST_CASE("threshold and round_half") {
    mlp::Matrix raw(1, 4);
    raw << 0.2, 0.5, 0.55, 0.9;
    CHECK(eval::round_half(raw) == (LabelMatrix(1, 4) << 0, 1, 1, 1).finished());
    CHECK(eval::threshold(raw, 0.6) == (LabelMatrix(1, 4) << 0, 0, 0, 1).finished());
}

TEST_CASE("table CSV has five PMU rows plus Overall") {
    eval::EvalTable t;
    t.raw_nn = {{90, 91, 92, 93, 94}, 92};
    t.detector = {{95, 96, 97, 98, 99}, 97};
    std::ostringstream out;
    eval::write_table_csv(out, t);
    CHECK(out.str() ==
          "pmu,raw_nn,detector\nPMU1,90.0000,95.0000\nPMU2,91.0000,96.0000\nPMU3,92.0000,97.0000\n"
          "PMU4,93.0000,98.0000\nPMU5,94.0000,99.0000\nOverall,92.0000,97.0000\n");
}

TEST_CASE("tune_alpha breaks ties toward 0.5") {
    // A zero network outputs 0.5 everywhere: every alpha above 0.5 scores the
    // same on all-clean labels, and 0.51 is the closest of them.
    data::LabeledDataset ds;
    ds.time_tags.assign(20, 0.0);
    ds.features = grid::Matrix::Zero(20, 5);
    ds.labels = LabelMatrix::Zero(20, 5);
    ds.sources = {{"z", 0}};
    ds.row_source.assign(20, 0);
    CHECK(eval::tune_alpha(mlp::zero_network({5, 5}), ds) == doctest::Approx(0.51));
    ds.labels.setOnes();
    CHECK(eval::tune_alpha(mlp::zero_network({5, 5}), ds) == doctest::Approx(0.5));
    const auto grid = eval::default_alpha_grid();
    CHECK(grid.size() == 91);
    CHECK(grid.front() == doctest::Approx(0.05));
    CHECK(grid.back() == doctest::Approx(0.95));
}

TEST_CASE("median") {
    CHECK(eval::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(eval::median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("conditions parse and classify") {
    CHECK(eval::parse_condition("noisy_load_change") == eval::Condition::noisy_load_change);
    CHECK(eval::has_noise(eval::Condition::noisy));
    CHECK(!eval::has_noise(eval::Condition::load_change));
    CHECK(eval::has_load_change(eval::Condition::noisy_load_change));
    CHECK_THROWS_AS(eval::parse_condition("windy"), ConfigError);
}

TEST_CASE("scenario generation is paired across conditions") {
    const auto params = grid::default_swing_parameters();
    const eval::SimulationRecipe recipe;
    const auto plain = eval::generate_scenario(params, recipe, 77, "a");
    eval::ScenarioOptions noisy;
    noisy.noise_std = 0.1;
    const auto with_noise = eval::generate_scenario(params, recipe, 77, "a", noisy);
    eval::ScenarioOptions load;
    load.load_change = eval::LoadChangeSchedule{};
    const auto with_load = eval::generate_scenario(params, recipe, 77, "a", load);

    CHECK(dump_scenario(plain.attack) == dump_scenario(with_noise.attack));
    CHECK(dump_scenario(plain.attack) == dump_scenario(with_load.attack));
    CHECK(plain.clean.states == with_noise.clean.states);
    CHECK(plain.dataset.labels == with_load.dataset.labels);
    // States agree before the load step at 5 s and differ after it.
    CHECK(plain.clean.states.topRows(250) == with_load.clean.states.topRows(250));
    CHECK(plain.clean.states.bottomRows(100) != with_load.clean.states.bottomRows(100));
    CHECK(with_noise.noise_std == 0.1);
}

TEST_CASE("experiment tables are consistent with the emitted traces") {
    eval::ExperimentSpec spec;
    spec.seed = 5;
    spec.scenario_count = 2;
    const auto net = mlp::initialize(mlp::default_layer_sizes(), 2);
    const auto r = eval::run_experiment(spec, grid::default_swing_parameters(), net, 0.52);
    REQUIRE(r.traces.size() == 2);
    CHECK(r.dataset.rows() == 1000);
    CHECK(r.alpha == 0.52);

    const auto dir = fs::temp_directory_path() / "pmuguard_test_experiment";
    fs::remove_all(dir);
    eval::write_experiment_artifacts(r, "test", dir);

    // Overall is recomputable from the per-sample detection CSVs.
    std::size_t right = 0, cells = 0;
    for (std::size_t s = 0; s < r.traces.size(); ++s) {
        const auto sub = dir / ("scenario-" + std::to_string(s));
        const auto det = read_csv(sub / "detection.csv");
        const auto lab = read_csv(sub / "labels.csv");
        REQUIRE(det.size() == lab.size());
        for (std::size_t k = 1; k < det.size(); ++k) {
            for (std::size_t j = 1; j <= 5; ++j) {
                right += det[k][j] == lab[k][j];
                ++cells;
            }
        }

        // The figure data reproduces theta_at on the sample grid.
        const auto angles = read_csv(sub / "attack_angles.csv");
        const auto& trace = r.traces[s];
        CHECK(trace.attack_angles == attack::offset_table(trace.attack, trace.time_tags, 5));
        for (std::size_t k = 1; k < angles.size(); ++k)
            for (std::size_t j = 1; j <= 5; ++j)
                CHECK(text::parse_number(angles[k][j]) ==
                      text::quantize_sig9(trace.attack_angles(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j - 1))));
        CHECK(fs::exists(sub / "attack_angles.svg"));
        CHECK(fs::exists(sub / "detector_output.svg"));
    }
    CHECK(100.0 * static_cast<double>(right) / static_cast<double>(cells) == doctest::Approx(r.table.detector.overall).epsilon(1e-12));

    const auto table = read_csv(dir / "table.csv");
    REQUIRE(table.size() == 7);
    CHECK(table[6][0] == "Overall");
    fs::remove_all(dir);
}

TEST_CASE("eval config: round trip and validation") {
    eval::EvalConfig cfg;
    cfg.seeds = {1, 2};
    cfg.conditions = {eval::Condition::noisy};
    cfg.alpha = 0.6;
    const auto back = eval::parse_eval_config(eval::dump_eval_config(cfg));
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.conditions == cfg.conditions);
    CHECK(back.alpha == 0.6);
    CHECK_THROWS_AS(eval::parse_eval_config(R"({"format":"pmuguard-eval","version":1,"seeds":[]})"), ConfigError);
    CHECK_THROWS_AS(eval::parse_eval_config(R"({"format":"pmuguard-eval","version":2})"), ConfigError);
}

TEST_CASE("dataset recipe: partial simulation block keeps the training defaults") {
    const auto r = eval::parse_dataset_recipe(
        R"({"format":"pmuguard-dataset-recipe","version":1,"simulation":{"attack_free_fraction":0.2}})");
    CHECK(r.simulation.attack_free_fraction == 0.2);
    CHECK(r.simulation.noise_std_max == eval::training_simulation_recipe().noise_std_max);
    CHECK(eval::parse_dataset_recipe(eval::dump_dataset_recipe(r)).scenarios == r.scenarios);
}
