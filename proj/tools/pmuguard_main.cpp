// pmuguard: simulate PMU data, inject GPS-spoofing phase offsets, train the
// MLP detector and evaluate it.
//
//   pmuguard simulate    --out run/
//   pmuguard attack      --trajectory run/trajectory.csv --config scenario.json --out run/
//   pmuguard dataset     --scenarios 20 --samples-per 500 --out data/
//   pmuguard train       --dataset data/dataset.csv --seed 7 --out model/
//   pmuguard detect      --checkpoint model/checkpoint.txt --data data/dataset.csv --out det/
//   pmuguard eval        --checkpoint model/checkpoint.txt --condition normal --out eval/
//   pmuguard sweep-alpha --checkpoint model/checkpoint.txt --out sweep/

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmuguard/attack.hpp"
#include "pmuguard/dataset.hpp"
#include "pmuguard/detector.hpp"
#include "pmuguard/error.hpp"
#include "pmuguard/experiment.hpp"
#include "pmuguard/grid_sim.hpp"
#include "pmuguard/mlp.hpp"
#include "pmuguard/text.hpp"

namespace fs = std::filesystem;
using namespace pmuguard;

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c, const std::string& config_help) {
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--config", c.config, config_help)->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return in;
}

grid::SwingParameters model_params(const std::string& path) {
    return path.empty() ? grid::default_swing_parameters() : grid::load_swing_parameters(path);
}

data::LabeledDataset read_dataset(const fs::path& path) {
    auto in = open_in(path);
    return data::read_dataset_csv(in);
}

// A dataset file, or a trajectory CSV (scored with all-zero labels).
data::LabeledDataset read_data_any(const fs::path& path) {
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    in.seekg(0);
    if (first.rfind("# pmuguard-dataset", 0) == 0) return data::read_dataset_csv(in);
    const auto traj = grid::read_trajectory_csv(in);
    const LabelMatrix zeros = LabelMatrix::Zero(static_cast<Eigen::Index>(traj.size()),
                                                static_cast<Eigen::Index>(traj.pmu_count()));
    return data::preprocess(traj, zeros, {path.filename().string(), 0}).dataset;
}

void run_simulate(const Common& c, const std::string& model_path, double duration, double rate,
                  const std::vector<std::string>& steps) {
    const auto params = model_params(c.config.empty() ? model_path : c.config);
    const auto model = grid::build_swing_model(params);
    grid::SimConfig cfg;
    cfg.duration = duration;
    cfg.sample_rate = rate;
    cfg.seed = c.seed.value_or(0);
    // Each --load-step is "time:generator:fraction" (generator 1-based); the
    // input then holds fraction * nominal input from that time on.
    grid::Vector u = grid::Vector::Zero(static_cast<Eigen::Index>(model.input_dim()));
    std::vector<std::pair<double, grid::Vector>> points;
    for (const auto& s : steps) {
        const auto parts = text::split(s, ':');
        if (parts.size() != 3) throw ConfigError("--load-step expects time:generator:fraction, got '" + s + "'");
        const double t = text::parse_number(parts[0]);
        const auto g = text::parse_integer(parts[1]);
        if (g < 1 || static_cast<std::size_t>(g) > model.n_subsystems) throw ConfigError("--load-step generator out of range");
        u[g - 1] = text::parse_number(parts[2]) * model.nominal_input[g - 1];
        points.emplace_back(t, u);
    }
    for (const auto& [t, v] : points) cfg.input_schedule.push_back({t, v});
    const auto traj = grid::simulate(model, cfg);
    auto out = open_out(fs::path(c.out) / "trajectory.csv");
    grid::write_trajectory_csv(out, traj);
    std::cout << "wrote " << traj.size() << " samples to " << (fs::path(c.out) / "trajectory.csv").string() << "\n";
}

void run_attack(const Common& c, const std::string& trajectory_path) {
    const auto traj = [&] {
        auto in = open_in(trajectory_path);
        return grid::read_trajectory_csv(in);
    }();
    if (traj.size() == 0) throw ConfigError("trajectory is empty");
    const double dt = traj.size() > 1 ? traj.time_tags[1] - traj.time_tags[0] : 1.0;
    const double duration = traj.time_tags.back() + dt;
    attack::AttackScenario scenario;
    if (!c.config.empty()) {
        scenario = attack::load_scenario(c.config);
    } else {
        std::mt19937_64 rng(c.seed.value_or(0));
        scenario = attack::random_scenario({}, traj.pmu_count(), duration, rng);
        scenario.id = "random-" + std::to_string(c.seed.value_or(0));
    }
    scenario.validate(traj.pmu_count(), duration);
    const auto inj = attack::inject(traj, scenario);
    const fs::path dir(c.out);
    {
        auto out = open_out(dir / "spoofed.csv");
        grid::write_trajectory_csv(out, inj.trajectory);
    }
    {
        auto out = open_out(dir / "labels.csv");
        attack::write_label_csv(out, inj.trajectory.time_tags, inj.labels);
    }
    {
        auto out = open_out(dir / "scenario.json");
        out << attack::dump_scenario(scenario);
    }
    std::cout << "applied " << scenario.profiles.size() << " attack profile(s); wrote spoofed.csv and labels.csv\n";
}

void run_dataset(const Common& c, const std::string& model_path, std::optional<std::size_t> scenarios,
                 std::optional<std::size_t> samples_per) {
    auto recipe = c.config.empty() ? eval::DatasetRecipe{} : eval::load_dataset_recipe(c.config);
    if (c.seed) recipe.seed = *c.seed;
    if (scenarios) recipe.scenarios = *scenarios;
    if (samples_per) recipe.samples_per = *samples_per;
    const auto ds = eval::generate_dataset(model_params(model_path), recipe);
    auto out = open_out(fs::path(c.out) / "dataset.csv");
    data::write_dataset_csv(out, ds);
    std::cout << "wrote " << ds.rows() << " rows x " << ds.pmu_count() << " PMUs to "
              << (fs::path(c.out) / "dataset.csv").string() << "\n";
}

void run_train(const Common& c, const std::string& dataset_path, const std::string& model_path) {
    auto cfg = c.config.empty() ? mlp::TrainConfig{} : mlp::load_train_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    const auto ds = dataset_path.empty() ? eval::generate_dataset(model_params(model_path), eval::DatasetRecipe{})
                                         : read_dataset(dataset_path);
    data::SplitSpec split_spec;
    split_spec.shuffle_seed = cfg.seed;
    const auto parts = data::split(ds, split_spec);
    const auto result = mlp::train(mlp::default_layer_sizes(), parts.train, parts.validation, cfg, &parts.test);
    const double alpha = eval::tune_alpha(result.network, parts.validation);

    const fs::path dir(c.out);
    mlp::save_checkpoint((fs::create_directories(dir), dir / "checkpoint.txt"), {result.network, alpha});
    {
        auto out = open_out(dir / "train_report.txt");
        out << mlp::format_report(result.report);
        // Accuracy over all rows of M, the figure reported for the training process.
        const auto overall = mlp::accuracy(result.network, ds);
        out << "overall accuracy: " << text::format_sig9(overall.per_cell) << " % per cell, "
            << text::format_sig9(overall.per_sample) << " % per sample\n";
        out << "tuned alpha: " << text::format_sig9(alpha) << "\n";
    }
    {
        auto out = open_out(dir / "loss_curve.csv");
        out << "epoch,train_loss,validation_loss\n";
        for (std::size_t e = 0; e < result.report.train_loss_curve.size(); ++e) {
            out << e + 1 << ',' << text::format_sig9(result.report.train_loss_curve[e]) << ','
                << text::format_sig9(result.report.validation_loss_curve[e]) << "\n";
        }
    }
    std::cout << mlp::format_report(result.report) << "tuned alpha: " << text::format_sig9(alpha) << "\n"
              << "wrote " << (dir / "checkpoint.txt").string() << "\n";
}

double pick_alpha(std::optional<double> flag, const mlp::Checkpoint& ckpt, std::optional<double> from_config = {}) {
    const double a = flag ? *flag : from_config ? *from_config : ckpt.alpha.value_or(0.5);
    detect::NormalizerConfig{a}.validate();
    return a;
}

void run_detect(const Common& c, const std::string& checkpoint, const std::string& data_path,
                std::optional<double> alpha_flag) {
    const auto ckpt = mlp::load_checkpoint(checkpoint);
    const double alpha = pick_alpha(alpha_flag, ckpt);
    const auto ds = read_data_any(data_path);
    const auto frames = detect::run_pipeline(ckpt.network, ds, {alpha});
    const fs::path dir(c.out);
    {
        auto out = open_out(dir / "detection.csv");
        detect::write_detection_csv(out, frames);
    }
    {
        auto out = open_out(dir / "alarms.txt");
        const auto alarms = detect::alarm_intervals(frames);
        detect::write_alarm_summary(out, alarms);
    }
    const auto score = eval::detection_percentage(detect::verdict_matrix(frames), ds.labels);
    std::cout << "scored " << frames.size() << " frames at alpha " << text::format_sig9(alpha)
              << "; agreement with file labels " << text::format_sig9(score.overall) << " %\n";
}

void run_eval(const Common& c, const std::string& checkpoint, const std::string& model_path,
              const std::string& condition, std::optional<double> alpha_flag) {
    if (checkpoint.empty()) throw ConfigError("eval needs --checkpoint (train one with 'pmuguard train')");
    auto cfg = c.config.empty() ? eval::EvalConfig{} : eval::load_eval_config(c.config);
    if (c.seed) {
        const auto n = cfg.seeds.size();
        cfg.seeds.clear();
        for (std::size_t i = 0; i < n; ++i) cfg.seeds.push_back(*c.seed + i);
    }
    const auto ckpt = mlp::load_checkpoint(checkpoint);
    const double alpha = pick_alpha(alpha_flag, ckpt, cfg.alpha);
    const auto params = model_params(model_path);
    const fs::path dir(c.out);
    fs::create_directories(dir);

    std::vector<eval::ConditionSummary> summaries;
    if (!condition.empty()) {
        summaries.push_back(eval::run_condition(cfg, eval::parse_condition(condition), params, ckpt.network, alpha, dir));
    } else {
        for (const auto cond : cfg.conditions) {
            summaries.push_back(eval::run_condition(cfg, cond, params, ckpt.network, alpha, dir / eval::to_string(cond)));
        }
        auto out = open_out(dir / "summary.txt");
        out << eval::format_summary(summaries, alpha);
    }
    std::cout << eval::format_summary(summaries, alpha);
}

void run_sweep(const Common& c, const std::string& checkpoint, const std::string& data_path,
               const std::string& model_path, const std::string& condition) {
    const auto ckpt = mlp::load_checkpoint(checkpoint);
    data::LabeledDataset ds;
    if (!data_path.empty()) {
        ds = read_data_any(data_path);
    } else {
        auto cfg = c.config.empty() ? eval::EvalConfig{} : eval::load_eval_config(c.config);
        eval::ExperimentSpec spec;
        spec.condition = eval::parse_condition(condition.empty() ? "normal" : condition);
        spec.noise_std = cfg.noise_std;
        spec.load_change = cfg.load_change;
        spec.scenario_count = cfg.scenarios_per_seed;
        spec.seed = c.seed.value_or(cfg.seeds.front());
        spec.simulation = cfg.simulation;
        ds = eval::run_experiment(spec, model_params(model_path), ckpt.network, 0.5).dataset;
    }
    const auto sweep = eval::sweep_alpha(ckpt.network, ds, eval::default_alpha_grid());
    auto out = open_out(fs::path(c.out) / "alpha_sweep.csv");
    eval::write_sweep_csv(out, sweep);
    const double best = eval::tune_alpha(ckpt.network, ds);
    std::cout << "best alpha on this data: " << text::format_sig9(best) << "; wrote "
              << (fs::path(c.out) / "alpha_sweep.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmuguard: GPS-spoofing detection for PMU rotor-angle streams"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Common sim_c, atk_c, ds_c, tr_c, det_c, ev_c, sw_c;
    std::string model_path, trajectory_path, dataset_path, checkpoint, data_path, condition;
    double duration = 10.0, rate = 50.0;
    std::vector<std::string> load_steps;
    std::optional<std::size_t> scenarios, samples_per;
    std::optional<double> alpha;

    auto* sim = app.add_subcommand("simulate", "Simulate the grid and write trajectory.csv");
    add_common(sim, sim_c, "Model config (pmuguard-model JSON)");
    sim->add_option("--duration", duration, "Window length [s]")->capture_default_str();
    sim->add_option("--sample-rate", rate, "Samples per second")->capture_default_str();
    sim->add_option("--load-step", load_steps, "time:generator:fraction input step (repeatable)");

    auto* atk = app.add_subcommand("attack", "Inject spoofing offsets into a trajectory");
    add_common(atk, atk_c, "Scenario file (pmuguard-scenario JSON); random scenario if omitted");
    atk->add_option("--trajectory", trajectory_path, "Trajectory CSV")->required()->check(CLI::ExistingFile);

    auto* dsc = app.add_subcommand("dataset", "Generate the labeled training matrix");
    add_common(dsc, ds_c, "Dataset recipe (pmuguard-dataset-recipe JSON)");
    dsc->add_option("--scenarios", scenarios, "Number of simulated scenarios");
    dsc->add_option("--samples-per", samples_per, "Rows per scenario");
    dsc->add_option("--model", model_path, "Model config")->check(CLI::ExistingFile);

    auto* tr = app.add_subcommand("train", "Train the detector network");
    add_common(tr, tr_c, "Train config (pmuguard-train JSON)");
    tr->add_option("--dataset", dataset_path, "Dataset CSV; the default recipe is generated if omitted")
        ->check(CLI::ExistingFile);
    tr->add_option("--model", model_path, "Model config used when generating data")->check(CLI::ExistingFile);

    auto* det = app.add_subcommand("detect", "Run the detection pipeline over a data file");
    add_common(det, det_c, "Unused; accepted for uniformity");
    det->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    det->add_option("--data", data_path, "Dataset or trajectory CSV")->required()->check(CLI::ExistingFile);
    det->add_option("--alpha", alpha, "Normalizer threshold (default: checkpoint value)");

    auto* ev = app.add_subcommand("eval", "Evaluate under normal / noisy / load-change conditions");
    add_common(ev, ev_c, "Eval config (pmuguard-eval JSON)");
    ev->add_option("--checkpoint", checkpoint, "Checkpoint file")->check(CLI::ExistingFile);
    ev->add_option("--model", model_path, "Model config")->check(CLI::ExistingFile);
    ev->add_option("--condition", condition, "Run a single condition");
    ev->add_option("--alpha", alpha, "Normalizer threshold (default: checkpoint value)");

    auto* sw = app.add_subcommand("sweep-alpha", "Detection accuracy as a function of alpha");
    add_common(sw, sw_c, "Eval config used when no --data is given");
    sw->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    sw->add_option("--data", data_path, "Dataset or trajectory CSV")->check(CLI::ExistingFile);
    sw->add_option("--model", model_path, "Model config")->check(CLI::ExistingFile);
    sw->add_option("--condition", condition, "Condition to simulate when no --data is given");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sim) run_simulate(sim_c, model_path, duration, rate, load_steps);
        else if (*atk) run_attack(atk_c, trajectory_path);
        else if (*dsc) run_dataset(ds_c, model_path, scenarios, samples_per);
        else if (*tr) run_train(tr_c, dataset_path, model_path);
        else if (*det) run_detect(det_c, checkpoint, data_path, alpha);
        else if (*ev) run_eval(ev_c, checkpoint, model_path, condition, alpha);
        else if (*sw) run_sweep(sw_c, checkpoint, data_path, model_path, condition);
    } catch (const pmuguard::ConfigError& e) {
        std::cerr << "pmuguard: error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
        return 2;
    } catch (const pmuguard::Error& e) {
        std::cerr << "pmuguard: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pmuguard: error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
