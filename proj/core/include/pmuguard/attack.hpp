#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmuguard/grid_sim.hpp"

namespace pmuguard {

// Per-sample, per-PMU binary labels (rows = samples).
using LabelMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace pmuguard

namespace pmuguard::attack {

enum class Waveform { step, ramp, pulse };

std::string to_string(Waveform w);
Waveform parse_waveform(std::string_view name);

// One spoofing episode: a phase offset added to a single PMU's angle channel
// over [start, end).
struct AttackProfile {
    std::size_t pmu_index = 0;  // 0-based
    Waveform waveform = Waveform::step;
    double start = 0.0;      // s
    double end = 0.0;        // s
    double magnitude = 0.0;  // rad
    double ramp_rate = 0.0;  // rad/s, ramp only
};

struct AttackScenario {
    std::string id;
    std::vector<AttackProfile> profiles;

    // pmu_index < n_pmu, 0 <= start < end <= duration, finite magnitude, and
    // no two profiles on one PMU with overlapping [start, end).
    void validate(std::size_t n_pmu, double duration) const;
};

double theta_at(const AttackProfile& profile, double t);

// The single scalar offset applied to every channel of `pmu` at time t.
double offset_at(const AttackScenario& scenario, std::size_t pmu, double t);

// samples x n_pmu table of offset_at over the given time tags.
grid::Matrix offset_table(const AttackScenario& scenario, std::span<const double> time_tags,
                          std::size_t n_pmu);

struct Injection {
    grid::Trajectory trajectory;
    LabelMatrix labels;
};

// z'_j[k] = z_j[k] + theta_j(t_k); labels are 1 exactly where the offset is
// nonzero. Channels of unattacked PMUs are copied bit for bit.
Injection inject(const grid::Trajectory& traj, const AttackScenario& scenario);

// Phasor view of one angle sample: |x| sin(omega t + theta).
std::vector<double> reconstruct_waveform(double magnitude, double phase, double omega,
                                         std::span<const double> times);

// Sinusoid amplitude estimated as sqrt(2) * RMS. Exact for samples spaced
// uniformly over a whole number of cycles, whatever the phase.
double envelope(std::span<const double> samples);

struct GeneratorConfig {
    double magnitude_min = 0.1;  // rad
    double magnitude_max = 1.0;  // rad
    std::size_t min_attacked = 1;
    std::size_t max_attacked = 3;
    double min_span = 2.0;  // step/ramp length [s]
    double max_span = 6.0;
    double pulse_min_span = 0.4;
    double pulse_max_span = 1.5;
    double ramp_rate_min = 0.2;  // rad/s
    double ramp_rate_max = 1.0;

    void validate() const;
};

// Draws between min_attacked and max_attacked distinct PMUs and gives each a
// single step, ramp or pulse profile inside [0, duration).
AttackScenario random_scenario(const GeneratorConfig& cfg, std::size_t n_pmu, double duration,
                               std::mt19937_64& rng);

AttackScenario parse_scenario(const std::string& json_text);
AttackScenario load_scenario(const std::filesystem::path& path);
std::string dump_scenario(const AttackScenario& scenario);

GeneratorConfig parse_generator_config(const nlohmann::json& j);
nlohmann::json generator_config_json(const GeneratorConfig& cfg);

// t,y1,...,yN
void write_label_csv(std::ostream& out, std::span<const double> time_tags, const LabelMatrix& labels);

}  // namespace pmuguard::attack
