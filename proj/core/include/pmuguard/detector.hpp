#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmuguard/dataset.hpp"
#include "pmuguard/mlp.hpp"

namespace pmuguard::detect {

struct NormalizerConfig {
    double alpha = 0.5;

    void validate() const;  // 0 < alpha < 1
};

// Step function u(y - alpha): 1 where y >= alpha, else 0.
std::vector<std::uint8_t> normalize(std::span<const double> raw, const NormalizerConfig& cfg);

// 0-based indices of flagged PMUs, ascending.
std::vector<std::size_t> localize(std::span<const std::uint8_t> verdicts);

struct DetectionFrame {
    double time_tag = 0.0;
    std::vector<std::uint8_t> verdicts;
    std::vector<double> raw_outputs;
    std::vector<std::size_t> attacked;  // localize(verdicts)
};

// Maps a feature matrix (rows = samples) to raw per-PMU scores in (0, 1).
using Scorer = std::function<mlp::Matrix(const mlp::Matrix&)>;

Scorer network_scorer(const mlp::MlpNetwork& net);

// Per row: score, normalize, localize, then re-attach the row's time tag.
std::vector<DetectionFrame> run_pipeline(const Scorer& scorer, const data::LabeledDataset& ds,
                                         const NormalizerConfig& cfg);
std::vector<DetectionFrame> run_pipeline(const mlp::MlpNetwork& net, const data::LabeledDataset& ds,
                                         const NormalizerConfig& cfg);

LabelMatrix verdict_matrix(std::span<const DetectionFrame> frames);

struct AlarmInterval {
    std::size_t pmu = 0;  // 0-based
    double start = 0.0;   // first flagged time tag
    double end = 0.0;     // last flagged time tag of the run
};

// Runs of consecutive flagged frames per PMU, in frame order.
std::vector<AlarmInterval> alarm_intervals(std::span<const DetectionFrame> frames);

// t,v1..vN,raw1..rawN
void write_detection_csv(std::ostream& out, std::span<const DetectionFrame> frames);
void write_alarm_summary(std::ostream& out, std::span<const AlarmInterval> alarms);

// "PMU2, PMU5" style 1-based listing; "none" when empty.
std::string format_attacked(std::span<const std::size_t> attacked);

}  // namespace pmuguard::detect
