#include "pmuguard/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pmuguard/error.hpp"
#include "pmuguard/plot.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::eval {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ stream) ^ index);
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::normal: return "normal";
        case Condition::noisy: return "noisy";
        case Condition::load_change: return "load_change";
        case Condition::noisy_load_change: return "noisy_load_change";
    }
    return "?";
}

Condition parse_condition(std::string_view name) {
    if (name == "normal") return Condition::normal;
    if (name == "noisy") return Condition::noisy;
    if (name == "load_change") return Condition::load_change;
    if (name == "noisy_load_change") return Condition::noisy_load_change;
    throw ConfigError("unknown condition '" + std::string(name) +
                      "' (expected normal, noisy, load_change or noisy_load_change)");
}

bool has_noise(Condition c) { return c == Condition::noisy || c == Condition::noisy_load_change; }
bool has_load_change(Condition c) { return c == Condition::load_change || c == Condition::noisy_load_change; }

void LoadChangeSchedule::validate(double window) const {
    if (!(time >= 0.0 && time <= window)) throw ConfigError("load change time must lie inside the window");
    if (max_subsystems == 0) throw ConfigError("load change needs at least one subsystem");
    if (!(min_fraction >= 0.0 && min_fraction <= max_fraction && std::isfinite(max_fraction))) {
        throw ConfigError("load change fractions must satisfy 0 <= min <= max");
    }
}

void SimulationRecipe::validate() const {
    if (!(sample_rate > 0.0) || !(window > 0.0)) throw ConfigError("sample_rate and window must be > 0");
    if (!(common_angle_range >= 0.0) || !(differential_angle_std >= 0.0) || !(speed_std >= 0.0)) {
        throw ConfigError("initial-state spreads must be >= 0");
    }
    if (noise_std_max >= 0.0 && !(noise_std_min >= 0.0 && noise_std_min <= noise_std_max)) {
        throw ConfigError("noise std range must satisfy 0 <= min <= max");
    }
    if (!(attack_free_fraction >= 0.0 && attack_free_fraction <= 1.0)) {
        throw ConfigError("attack_free_fraction must lie in [0, 1]");
    }
    attacks.validate();
}

SimulationRecipe parse_simulation_recipe(const nlohmann::json& j, const SimulationRecipe& defaults) {
    SimulationRecipe r = defaults;
    try {
        r.sample_rate = j.value("sample_rate", r.sample_rate);
        r.window = j.value("window", r.window);
        r.common_angle_range = j.value("common_angle_range", r.common_angle_range);
        r.differential_angle_std = j.value("differential_angle_std", r.differential_angle_std);
        r.speed_std = j.value("speed_std", r.speed_std);
        r.noise_std_min = j.value("noise_std_min", r.noise_std_min);
        r.noise_std_max = j.value("noise_std_max", r.noise_std_max);
        r.attack_free_fraction = j.value("attack_free_fraction", r.attack_free_fraction);
        if (j.contains("attacks")) r.attacks = attack::parse_generator_config(j["attacks"]);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("simulation recipe: ") + e.what());
    }
    r.validate();
    return r;
}

nlohmann::json simulation_recipe_json(const SimulationRecipe& r) {
    nlohmann::ordered_json j;
    j["sample_rate"] = r.sample_rate;
    j["window"] = r.window;
    j["common_angle_range"] = r.common_angle_range;
    j["differential_angle_std"] = r.differential_angle_std;
    j["speed_std"] = r.speed_std;
    j["noise_std_min"] = r.noise_std_min;
    j["noise_std_max"] = r.noise_std_max;
    j["attack_free_fraction"] = r.attack_free_fraction;
    j["attacks"] = attack::generator_config_json(r.attacks);
    return j;
}

GeneratedScenario generate_scenario(const grid::SwingParameters& params, const SimulationRecipe& recipe,
                                    std::uint64_t seed, const std::string& id, const ScenarioOptions& options) {
    recipe.validate();
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double a, double b) {
        return a == b ? a : std::uniform_real_distribution<double>(a, b)(rng);
    };
    std::normal_distribution<double> normal(0.0, 1.0);

    GeneratedScenario out;
    grid::SwingParameters p = params;
    const double drawn_noise =
        recipe.noise_std_max < 0.0 ? params.measurement_noise_std : uniform(recipe.noise_std_min, recipe.noise_std_max);
    out.noise_std = options.noise_std.value_or(drawn_noise);
    p.measurement_noise_std = out.noise_std;
    const auto model = grid::build_swing_model(p);
    const std::size_t n = model.n_subsystems;

    grid::SimConfig cfg;
    cfg.sample_rate = recipe.sample_rate;
    cfg.duration = recipe.window;
    cfg.seed = derive_seed(seed, 1, 0);
    cfg.initial_state = grid::Vector::Zero(static_cast<Eigen::Index>(model.state_dim()));
    const double common = uniform(-recipe.common_angle_range, recipe.common_angle_range);
    for (std::size_t i = 0; i < n; ++i) {
        const auto off = static_cast<Eigen::Index>(model.state_offset(i));
        cfg.initial_state[off] = common + recipe.differential_angle_std * normal(rng);
        cfg.initial_state[off + 1] = recipe.speed_std * normal(rng);
    }

    // Attacks are drawn before the load change so that conditions with and
    // without a load step replay the same attacks.
    if (options.attack) {
        out.attack = *options.attack;
    } else if (uniform(0.0, 1.0) < recipe.attack_free_fraction) {
        out.attack = {};
    } else {
        out.attack = attack::random_scenario(recipe.attacks, n, recipe.window, rng);
    }
    out.attack.id = id;
    out.attack.validate(n, recipe.window);

    if (options.load_change) {
        const auto& lc = *options.load_change;
        lc.validate(recipe.window);
        std::vector<std::size_t> gens(n);
        std::iota(gens.begin(), gens.end(), std::size_t{0});
        std::shuffle(gens.begin(), gens.end(), rng);
        const std::size_t count =
            std::uniform_int_distribution<std::size_t>(1, std::min(lc.max_subsystems, n))(rng);
        grid::Vector u = grid::Vector::Zero(static_cast<Eigen::Index>(model.input_dim()));
        for (std::size_t g = 0; g < count; ++g) {
            const auto idx = static_cast<Eigen::Index>(gens[g]);
            u[idx] = uniform(lc.min_fraction, lc.max_fraction) * model.nominal_input[idx];
        }
        cfg.input_schedule.push_back({lc.time, u});
    }

    out.clean = grid::simulate(model, cfg);

    out.injected = attack::inject(out.clean, out.attack);
    out.dataset = data::preprocess(out.injected.trajectory, out.injected.labels, {id, seed}).dataset;
    return out;
}

SimulationRecipe training_simulation_recipe() {
    SimulationRecipe r;
    r.noise_std_min = 0.0;
    r.noise_std_max = 0.1;
    return r;
}

void DatasetRecipe::validate() const {
    if (scenarios == 0 || samples_per == 0) throw ConfigError("dataset recipe: scenarios and samples_per must be > 0");
    simulation.validate();
}

DatasetRecipe parse_dataset_recipe(const std::string& json_text) {
    const auto j = text::parse_config(json_text, "pmuguard-dataset-recipe", 1);
    DatasetRecipe r;
    try {
        r.scenarios = j.value("scenarios", r.scenarios);
        r.samples_per = j.value("samples_per", r.samples_per);
        r.seed = j.value("seed", r.seed);
        if (j.contains("simulation")) r.simulation = parse_simulation_recipe(j["simulation"], r.simulation);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("dataset recipe: ") + e.what());
    }
    r.validate();
    return r;
}

DatasetRecipe load_dataset_recipe(const std::filesystem::path& path) {
    return parse_dataset_recipe(text::read_file(path.string()));
}

std::string dump_dataset_recipe(const DatasetRecipe& r) {
    nlohmann::ordered_json j;
    j["format"] = "pmuguard-dataset-recipe";
    j["version"] = 1;
    j["scenarios"] = r.scenarios;
    j["samples_per"] = r.samples_per;
    j["seed"] = r.seed;
    j["simulation"] = simulation_recipe_json(r.simulation);
    return j.dump(2) + "\n";
}

data::LabeledDataset generate_dataset(const grid::SwingParameters& params, const DatasetRecipe& recipe) {
    recipe.validate();
    SimulationRecipe sim = recipe.simulation;
    sim.window = static_cast<double>(recipe.samples_per) / sim.sample_rate;
    std::vector<data::LabeledDataset> parts;
    parts.reserve(recipe.scenarios);
    for (std::size_t i = 0; i < recipe.scenarios; ++i) {
        const auto seed = derive_seed(recipe.seed, 0, i);
        parts.push_back(generate_scenario(params, sim, seed, "train-" + std::to_string(i)).dataset);
    }
    return data::concat(parts);
}

DetectionScore detection_percentage(const LabelMatrix& verdicts, const LabelMatrix& labels) {
    if (verdicts.rows() != labels.rows() || verdicts.cols() != labels.cols()) {
        throw DimensionError("verdicts and labels must have the same shape");
    }
    if (verdicts.size() == 0) throw EmptyDatasetError("detection percentage of an empty table");
    DetectionScore s;
    std::size_t total = 0;
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
        const auto hits = static_cast<std::size_t>((verdicts.col(j).array() == labels.col(j).array()).count());
        total += hits;
        s.per_pmu.push_back(100.0 * static_cast<double>(hits) / static_cast<double>(labels.rows()));
    }
    s.overall = 100.0 * static_cast<double>(total) / static_cast<double>(labels.size());
    return s;
}

LabelMatrix threshold(const mlp::Matrix& raw, double alpha) {
    return raw.unaryExpr([alpha](double y) -> std::uint8_t { return y >= alpha ? 1 : 0; });
}

LabelMatrix round_half(const mlp::Matrix& raw) { return threshold(raw, 0.5); }

void write_table_csv(std::ostream& out, const EvalTable& t) {
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };
    out << "pmu,raw_nn,detector\n";
    for (std::size_t j = 0; j < t.raw_nn.per_pmu.size(); ++j) {
        out << "PMU" << j + 1 << ',' << pct(t.raw_nn.per_pmu[j]) << ',' << pct(t.detector.per_pmu[j]) << "\n";
    }
    out << "Overall," << pct(t.raw_nn.overall) << ',' << pct(t.detector.overall) << "\n";
}

std::string format_table(const EvalTable& t, const std::string& title) {
    std::ostringstream ss;
    char buf[96];
    ss << title << "\n";
    std::snprintf(buf, sizeof buf, "%-9s %12s %12s\n", "", "NN output", "detector");
    ss << buf;
    for (std::size_t j = 0; j < t.raw_nn.per_pmu.size(); ++j) {
        std::snprintf(buf, sizeof buf, "PMU%-6zu %12.4f %12.4f\n", j + 1, t.raw_nn.per_pmu[j], t.detector.per_pmu[j]);
        ss << buf;
    }
    std::snprintf(buf, sizeof buf, "%-9s %12.4f %12.4f\n", "Overall", t.raw_nn.overall, t.detector.overall);
    ss << buf;
    return ss.str();
}

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int i = 5; i <= 95; ++i) g.push_back(i / 100.0);
    return g;
}

std::vector<AlphaPoint> sweep_alpha(const mlp::MlpNetwork& net, const data::LabeledDataset& ds,
                                    const std::vector<double>& alphas) {
    const auto raw = mlp::forward_batch(net, ds.features);
    std::vector<AlphaPoint> out;
    for (const double a : alphas) {
        detect::NormalizerConfig{a}.validate();
        out.push_back({a, detection_percentage(threshold(raw, a), ds.labels)});
    }
    return out;
}

double tune_alpha(const mlp::MlpNetwork& net, const data::LabeledDataset& ds, const std::vector<double>& candidates) {
    const auto grid = candidates.empty() ? default_alpha_grid() : candidates;
    const auto sweep = sweep_alpha(net, ds, grid);
    double best_alpha = 0.5, best_score = -1.0;
    for (const auto& p : sweep) {
        const bool better = p.score.overall > best_score ||
                            (p.score.overall == best_score && std::abs(p.alpha - 0.5) < std::abs(best_alpha - 0.5));
        if (better) {
            best_score = p.score.overall;
            best_alpha = p.alpha;
        }
    }
    return best_alpha;
}

void write_sweep_csv(std::ostream& out, const std::vector<AlphaPoint>& sweep) {
    const std::size_t width = sweep.empty() ? 0 : sweep.front().score.per_pmu.size();
    out << "alpha";
    for (std::size_t j = 0; j < width; ++j) out << ",pmu" << j + 1;
    out << ",overall\n";
    for (const auto& p : sweep) {
        out << text::format_sig9(p.alpha);
        for (const double v : p.score.per_pmu) out << ',' << text::format_sig9(v);
        out << ',' << text::format_sig9(p.score.overall) << "\n";
    }
}

void ExperimentSpec::validate() const {
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise_std must be >= 0");
    simulation.validate();
    if (has_load_change(condition)) load_change.validate(simulation.window);
    if (attack_scenarios.empty() && scenario_count == 0) throw ConfigError("experiment needs at least one scenario");
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const grid::SwingParameters& params,
                                const mlp::MlpNetwork& net, double alpha) {
    spec.validate();
    detect::NormalizerConfig normalizer{alpha};
    normalizer.validate();
    const auto model = grid::build_swing_model(params);
    if (net.input_size() != model.output_dim() || net.output_size() != model.output_dim()) {
        throw DimensionError("network width does not match the grid's PMU count");
    }
    const auto c_full = grid::assemble_full_system(model).c;

    const std::size_t count = spec.attack_scenarios.empty() ? spec.scenario_count : spec.attack_scenarios.size();
    ExperimentResult result;
    result.alpha = alpha;
    std::vector<data::LabeledDataset> parts;
    double signal_power = 0.0, noise_power = 0.0;

    for (std::size_t i = 0; i < count; ++i) {
        ScenarioOptions opts;
        if (has_noise(spec.condition)) opts.noise_std = spec.noise_std;
        if (has_load_change(spec.condition)) opts.load_change = spec.load_change;
        if (!spec.attack_scenarios.empty()) {
            opts.attack = spec.attack_scenarios[i];
        } else if (spec.attack_free) {
            opts.attack = attack::AttackScenario{};
        }
        // Scenario seeds ignore the condition so every condition replays the
        // same attacks and initial states.
        const auto seed = derive_seed(spec.seed, 7, i);
        const std::string id = "eval-" + std::to_string(spec.seed) + "-" + std::to_string(i);
        auto gen = generate_scenario(params, spec.simulation, seed, id, opts);

        ScenarioTrace trace;
        trace.id = id;
        trace.attack = gen.attack;
        trace.time_tags = gen.dataset.time_tags;
        trace.attack_angles = attack::offset_table(gen.attack, gen.clean.time_tags, model.output_dim());
        trace.labels = gen.dataset.labels;
        trace.frames = detect::run_pipeline(net, gen.dataset, normalizer);

        const grid::Matrix noise_free = gen.clean.states * c_full.transpose() + trace.attack_angles;
        signal_power += noise_free.squaredNorm();
        noise_power += gen.noise_std * gen.noise_std * static_cast<double>(noise_free.size());

        result.traces.push_back(std::move(trace));
        parts.push_back(std::move(gen.dataset));
    }

    result.dataset = data::concat(parts);
    result.raw_outputs = mlp::forward_batch(net, result.dataset.features);
    std::vector<detect::DetectionFrame> frames;
    for (const auto& t : result.traces) frames.insert(frames.end(), t.frames.begin(), t.frames.end());
    result.detector_verdicts = detect::verdict_matrix(frames);
    result.table.raw_nn = detection_percentage(round_half(result.raw_outputs), result.dataset.labels);
    result.table.detector = detection_percentage(result.detector_verdicts, result.dataset.labels);
    result.snr_db = noise_power > 0.0 ? 10.0 * std::log10(signal_power / noise_power)
                                      : std::numeric_limits<double>::infinity();
    return result;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

std::vector<plot::Series> columns(const grid::Matrix& m, const char* prefix) {
    std::vector<plot::Series> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        plot::Series s{std::string(prefix) + std::to_string(j + 1), {}};
        for (Eigen::Index k = 0; k < m.rows(); ++k) s.values.push_back(m(k, j));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

void write_experiment_artifacts(const ExperimentResult& result, const std::string& title,
                                const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "table.csv");
        write_table_csv(out, result.table);
    }
    {
        auto out = open_out(dir / "summary.txt");
        out << format_table(result.table, title);
        out << "alpha: " << text::format_sig9(result.alpha) << "\n";
        out << "SNR: " << text::format_sig9(result.snr_db) << " dB\n";
    }
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
        const auto& t = result.traces[i];
        const auto sub = dir / ("scenario-" + std::to_string(i));
        std::filesystem::create_directories(sub);
        {
            grid::Trajectory angles{t.time_tags, {}, t.attack_angles};
            auto out = open_out(sub / "attack_angles.csv");
            grid::write_trajectory_csv(out, angles);
        }
        {
            auto out = open_out(sub / "labels.csv");
            attack::write_label_csv(out, t.time_tags, t.labels);
        }
        {
            auto out = open_out(sub / "detection.csv");
            detect::write_detection_csv(out, t.frames);
        }
        {
            auto out = open_out(sub / "alarms.txt");
            const auto alarms = detect::alarm_intervals(t.frames);
            detect::write_alarm_summary(out, alarms);
        }
        {
            auto out = open_out(sub / "attack_angles.svg");
            plot::write_svg(out, t.id + ": spoofing phase offsets", "offset [rad]", t.time_tags,
                            columns(t.attack_angles, "PMU"));
        }
        {
            grid::Matrix raw(static_cast<Eigen::Index>(t.frames.size()),
                             t.frames.empty() ? 0 : static_cast<Eigen::Index>(t.frames.front().raw_outputs.size()));
            grid::Matrix verdicts(raw.rows(), raw.cols());
            for (std::size_t k = 0; k < t.frames.size(); ++k) {
                for (Eigen::Index j = 0; j < raw.cols(); ++j) {
                    raw(static_cast<Eigen::Index>(k), j) = t.frames[k].raw_outputs[static_cast<std::size_t>(j)];
                    // Stack verdicts so the PMUs do not overlap.
                    verdicts(static_cast<Eigen::Index>(k), j) =
                        t.frames[k].verdicts[static_cast<std::size_t>(j)] * 0.8 + static_cast<double>(j);
                }
            }
            auto out = open_out(sub / "nn_output.svg");
            plot::write_svg(out, t.id + ": network outputs", "output", t.time_tags, columns(raw, "PMU"));
            auto out2 = open_out(sub / "detector_output.svg");
            plot::write_svg(out2, t.id + ": detector verdicts (PMU j offset by j-1)", "verdict", t.time_tags,
                            columns(verdicts, "PMU"));
        }
    }
}

void EvalConfig::validate() const {
    if (conditions.empty() || seeds.empty()) throw ConfigError("eval config needs conditions and seeds");
    if (scenarios_per_seed == 0) throw ConfigError("eval config: scenarios_per_seed must be > 0");
    if (!(noise_std >= 0.0)) throw ConfigError("eval config: noise_std must be >= 0");
    simulation.validate();
    load_change.validate(simulation.window);
    if (alpha) detect::NormalizerConfig{*alpha}.validate();
}

EvalConfig parse_eval_config(const std::string& json_text) {
    const auto j = text::parse_config(json_text, "pmuguard-eval", 1);
    EvalConfig c;
    try {
        if (j.contains("conditions")) {
            c.conditions.clear();
            for (const auto& name : j["conditions"]) c.conditions.push_back(parse_condition(name.get<std::string>()));
        }
        c.seeds = j.value("seeds", c.seeds);
        c.scenarios_per_seed = j.value("scenarios_per_seed", c.scenarios_per_seed);
        c.noise_std = j.value("noise_std", c.noise_std);
        if (j.contains("load_change")) {
            const auto& lc = j["load_change"];
            c.load_change.time = lc.value("time", c.load_change.time);
            c.load_change.max_subsystems = lc.value("max_subsystems", c.load_change.max_subsystems);
            c.load_change.min_fraction = lc.value("min_fraction", c.load_change.min_fraction);
            c.load_change.max_fraction = lc.value("max_fraction", c.load_change.max_fraction);
        }
        if (j.contains("simulation")) c.simulation = parse_simulation_recipe(j["simulation"], c.simulation);
        if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("eval config: ") + e.what());
    }
    c.validate();
    return c;
}

EvalConfig load_eval_config(const std::filesystem::path& path) {
    return parse_eval_config(text::read_file(path.string()));
}

std::string dump_eval_config(const EvalConfig& c) {
    nlohmann::ordered_json j;
    j["format"] = "pmuguard-eval";
    j["version"] = 1;
    j["conditions"] = nlohmann::ordered_json::array();
    for (const auto cond : c.conditions) j["conditions"].push_back(to_string(cond));
    j["seeds"] = c.seeds;
    j["scenarios_per_seed"] = c.scenarios_per_seed;
    j["noise_std"] = c.noise_std;
    j["load_change"] = {{"time", c.load_change.time},
                        {"max_subsystems", c.load_change.max_subsystems},
                        {"min_fraction", c.load_change.min_fraction},
                        {"max_fraction", c.load_change.max_fraction}};
    j["simulation"] = simulation_recipe_json(c.simulation);
    j["alpha"] = c.alpha ? nlohmann::ordered_json(*c.alpha) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyDatasetError("median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ConditionSummary run_condition(const EvalConfig& cfg, Condition condition, const grid::SwingParameters& params,
                               const mlp::MlpNetwork& net, double alpha,
                               const std::optional<std::filesystem::path>& out_dir) {
    cfg.validate();
    ConditionSummary s;
    s.condition = condition;
    std::vector<double> raw_overall, det_overall, snr;
    LabelMatrix all_raw, all_det, all_labels;
    for (const auto seed : cfg.seeds) {
        ExperimentSpec spec;
        spec.condition = condition;
        spec.noise_std = cfg.noise_std;
        spec.load_change = cfg.load_change;
        spec.scenario_count = cfg.scenarios_per_seed;
        spec.seed = seed;
        spec.simulation = cfg.simulation;
        const auto r = run_experiment(spec, params, net, alpha);
        if (out_dir) {
            write_experiment_artifacts(r, to_string(condition) + ", seed " + std::to_string(seed),
                                       *out_dir / ("seed-" + std::to_string(seed)));
        }
        s.per_seed.push_back(r.table);
        raw_overall.push_back(r.table.raw_nn.overall);
        det_overall.push_back(r.table.detector.overall);
        snr.push_back(r.snr_db);

        const LabelMatrix raw_v = round_half(r.raw_outputs);
        const auto base = all_labels.rows();
        all_raw.conservativeResize(base + raw_v.rows(), raw_v.cols());
        all_det.conservativeResize(base + raw_v.rows(), raw_v.cols());
        all_labels.conservativeResize(base + raw_v.rows(), raw_v.cols());
        all_raw.bottomRows(raw_v.rows()) = raw_v;
        all_det.bottomRows(raw_v.rows()) = r.detector_verdicts;
        all_labels.bottomRows(raw_v.rows()) = r.dataset.labels;
    }
    s.pooled.raw_nn = detection_percentage(all_raw, all_labels);
    s.pooled.detector = detection_percentage(all_det, all_labels);
    s.median_raw_nn = median(raw_overall);
    s.median_detector = median(det_overall);
    s.mean_snr_db = std::accumulate(snr.begin(), snr.end(), 0.0) / static_cast<double>(snr.size());
    if (out_dir) {
        auto out = open_out(*out_dir / "table.csv");
        write_table_csv(out, s.pooled);
        auto txt = open_out(*out_dir / "summary.txt");
        txt << format_summary({s}, alpha);
    }
    return s;
}

std::string format_summary(const std::vector<ConditionSummary>& summaries, double alpha) {
    std::ostringstream ss;
    ss << "Percentage of attack detection on PMUs (alpha = " << text::format_sig9(alpha) << ")\n\n";
    for (const auto& s : summaries) {
        ss << format_table(s.pooled, "Condition: " + to_string(s.condition) + " (" +
                                         std::to_string(s.per_seed.size()) + " seeds pooled)");
        char buf[160];
        std::snprintf(buf, sizeof buf, "median overall over seeds: NN output %.4f, detector %.4f; mean SNR %.2f dB\n\n",
                      s.median_raw_nn, s.median_detector, s.mean_snr_db);
        ss << buf;
    }
    return ss.str();
}

}  // namespace pmuguard::eval
