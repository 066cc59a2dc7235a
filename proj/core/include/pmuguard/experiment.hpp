#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmuguard/attack.hpp"
#include "pmuguard/dataset.hpp"
#include "pmuguard/detector.hpp"
#include "pmuguard/grid_sim.hpp"
#include "pmuguard/mlp.hpp"

namespace pmuguard::eval {

// splitmix64 over (base, stream, index); used for every per-scenario seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

enum class Condition { normal, noisy, load_change, noisy_load_change };

std::string to_string(Condition c);
Condition parse_condition(std::string_view name);
bool has_noise(Condition c);
bool has_load_change(Condition c);

// Step in mechanical input applied at `time` to 1..max_subsystems randomly
// chosen generators, sized as a fraction of each one's nominal input.
struct LoadChangeSchedule {
    double time = 5.0;  // s
    std::size_t max_subsystems = 2;
    double min_fraction = 0.10;
    double max_fraction = 0.20;

    void validate(double window) const;
};

// How individual scenarios vary before any attack is added.
struct SimulationRecipe {
    double sample_rate = 50.0;
    double window = 10.0;
    double common_angle_range = 0.2;       // initial common-mode angle ~ U(-r, r) [rad]
    double differential_angle_std = 0.05;  // per-generator initial angle perturbation [rad]
    double speed_std = 0.0;                // initial speed perturbation [rad/s]
    double noise_std_min = 0.0;            // measurement noise std ~ U(min, max); negative max
    double noise_std_max = -1.0;           //   keeps the model's own value
    double attack_free_fraction = 0.1;     // share of scenarios with no attack at all
    attack::GeneratorConfig attacks;

    void validate() const;
};

// Keys missing from `j` keep their value from `defaults`.
SimulationRecipe parse_simulation_recipe(const nlohmann::json& j, const SimulationRecipe& defaults = {});
nlohmann::json simulation_recipe_json(const SimulationRecipe& r);

struct ScenarioOptions {
    std::optional<double> noise_std;               // overrides the recipe's draw
    std::optional<LoadChangeSchedule> load_change;
    std::optional<attack::AttackScenario> attack;  // overrides the random draw
};

struct GeneratedScenario {
    grid::Trajectory clean;
    attack::AttackScenario attack;
    attack::Injection injected;
    data::LabeledDataset dataset;
    double noise_std = 0.0;
};

GeneratedScenario generate_scenario(const grid::SwingParameters& params, const SimulationRecipe& recipe,
                                    std::uint64_t seed, const std::string& id,
                                    const ScenarioOptions& options = {});

// Training data sees measurement noise with std ~ U(0, 0.1) rad so that one
// network covers both the clean and the noisy evaluation conditions.
SimulationRecipe training_simulation_recipe();

struct DatasetRecipe {
    std::size_t scenarios = 20;
    std::size_t samples_per = 500;
    std::uint64_t seed = 1;
    SimulationRecipe simulation = training_simulation_recipe();

    void validate() const;
};

DatasetRecipe parse_dataset_recipe(const std::string& json_text);
DatasetRecipe load_dataset_recipe(const std::filesystem::path& path);
std::string dump_dataset_recipe(const DatasetRecipe& recipe);

// The training matrix: `scenarios` runs of `samples_per` rows each. The
// recipe's window is replaced by samples_per / sample_rate.
data::LabeledDataset generate_dataset(const grid::SwingParameters& params, const DatasetRecipe& recipe);

struct DetectionScore {
    std::vector<double> per_pmu;  // %
    double overall = 0.0;         // % over every (sample, PMU) cell
};

DetectionScore detection_percentage(const LabelMatrix& verdicts, const LabelMatrix& labels);

// Verdicts from raw scores rounded at a fixed 0.5.
LabelMatrix round_half(const mlp::Matrix& raw);
LabelMatrix threshold(const mlp::Matrix& raw, double alpha);

struct EvalTable {
    DetectionScore raw_nn;
    DetectionScore detector;
};

void write_table_csv(std::ostream& out, const EvalTable& table);
std::string format_table(const EvalTable& table, const std::string& title);

// Alpha in the grid that maximizes overall accuracy on `ds`; ties go to the
// candidate closest to 0.5.
double tune_alpha(const mlp::MlpNetwork& net, const data::LabeledDataset& ds,
                  const std::vector<double>& candidates = {});
std::vector<double> default_alpha_grid();

struct AlphaPoint {
    double alpha = 0.5;
    DetectionScore score;
};

std::vector<AlphaPoint> sweep_alpha(const mlp::MlpNetwork& net, const data::LabeledDataset& ds,
                                    const std::vector<double>& alphas);
void write_sweep_csv(std::ostream& out, const std::vector<AlphaPoint>& sweep);

struct ExperimentSpec {
    Condition condition = Condition::normal;
    double noise_std = 0.1;  // rad, used by the noisy conditions
    LoadChangeSchedule load_change;
    std::vector<attack::AttackScenario> attack_scenarios;  // empty: draw scenario_count at random
    std::size_t scenario_count = 4;
    std::uint64_t seed = 1;
    SimulationRecipe simulation;
    bool attack_free = false;  // every scenario clean (false-alarm runs)

    void validate() const;
};

struct ScenarioTrace {
    std::string id;
    attack::AttackScenario attack;
    std::vector<double> time_tags;
    grid::Matrix attack_angles;  // theta_spf per PMU on the sample grid
    LabelMatrix labels;
    std::vector<detect::DetectionFrame> frames;
};

struct ExperimentResult {
    EvalTable table;
    data::LabeledDataset dataset;  // every scenario, in order
    mlp::Matrix raw_outputs;
    LabelMatrix detector_verdicts;
    std::vector<ScenarioTrace> traces;
    double snr_db = 0.0;  // mean-square noise-free signal over noise power; inf when noise-free
    double alpha = 0.5;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, const grid::SwingParameters& params,
                                const mlp::MlpNetwork& net, double alpha);

// table.csv, summary.txt and per-scenario attack_angles / labels / detection
// CSVs plus SVG plots under `dir`.
void write_experiment_artifacts(const ExperimentResult& result, const std::string& title,
                                const std::filesystem::path& dir);

struct EvalConfig {
    std::vector<Condition> conditions = {Condition::normal, Condition::noisy, Condition::load_change,
                                         Condition::noisy_load_change};
    std::vector<std::uint64_t> seeds = {101, 102, 103, 104, 105};
    std::size_t scenarios_per_seed = 4;
    double noise_std = 0.1;
    LoadChangeSchedule load_change;
    SimulationRecipe simulation;
    std::optional<double> alpha;  // unset: checkpoint value, else 0.5

    void validate() const;
};

EvalConfig parse_eval_config(const std::string& json_text);
EvalConfig load_eval_config(const std::filesystem::path& path);
std::string dump_eval_config(const EvalConfig& cfg);

struct ConditionSummary {
    Condition condition = Condition::normal;
    std::vector<EvalTable> per_seed;
    EvalTable pooled;  // every seed's cells together
    double median_raw_nn = 0.0;
    double median_detector = 0.0;
    double mean_snr_db = 0.0;
};

ConditionSummary run_condition(const EvalConfig& cfg, Condition condition, const grid::SwingParameters& params,
                               const mlp::MlpNetwork& net, double alpha,
                               const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::string format_summary(const std::vector<ConditionSummary>& summaries, double alpha);

double median(std::vector<double> values);

}  // namespace pmuguard::eval
