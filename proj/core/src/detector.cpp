#include "pmuguard/detector.hpp"

#include <cmath>
#include <ostream>

#include "pmuguard/error.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::detect {

void NormalizerConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

std::vector<std::uint8_t> normalize(std::span<const double> raw, const NormalizerConfig& cfg) {
    cfg.validate();
    std::vector<std::uint8_t> out;
    out.reserve(raw.size());
    for (const double y : raw) out.push_back(y >= cfg.alpha ? 1 : 0);
    return out;
}

std::vector<std::size_t> localize(std::span<const std::uint8_t> verdicts) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < verdicts.size(); ++j) {
        if (verdicts[j] != 0) out.push_back(j);
    }
    return out;
}

Scorer network_scorer(const mlp::MlpNetwork& net) {
    return [&net](const mlp::Matrix& x) { return mlp::forward_batch(net, x); };
}

std::vector<DetectionFrame> run_pipeline(const Scorer& scorer, const data::LabeledDataset& ds,
                                         const NormalizerConfig& cfg) {
    cfg.validate();
    const mlp::Matrix raw = scorer(ds.features);
    if (raw.rows() != ds.features.rows() || raw.cols() != ds.features.cols()) {
        throw DimensionError("scorer output shape does not match the dataset");
    }
    std::vector<DetectionFrame> frames;
    frames.reserve(ds.rows());
    std::vector<double> row(static_cast<std::size_t>(raw.cols()));
    for (Eigen::Index r = 0; r < raw.rows(); ++r) {
        for (Eigen::Index c = 0; c < raw.cols(); ++c) {
            row[static_cast<std::size_t>(c)] = raw(r, c);
            if (!std::isfinite(raw(r, c))) throw NumericError("scorer produced a non-finite output");
        }
        DetectionFrame f;
        f.raw_outputs = row;
        f.verdicts = normalize(row, cfg);
        f.attacked = localize(f.verdicts);
        f.time_tag = ds.time_tags[static_cast<std::size_t>(r)];
        frames.push_back(std::move(f));
    }
    return frames;
}

std::vector<DetectionFrame> run_pipeline(const mlp::MlpNetwork& net, const data::LabeledDataset& ds,
                                         const NormalizerConfig& cfg) {
    if (ds.pmu_count() != net.input_size()) {
        throw DimensionError("dataset width " + std::to_string(ds.pmu_count()) + " does not match network input " +
                             std::to_string(net.input_size()));
    }
    return run_pipeline(network_scorer(net), ds, cfg);
}

LabelMatrix verdict_matrix(std::span<const DetectionFrame> frames) {
    const auto width = frames.empty() ? 0 : static_cast<Eigen::Index>(frames.front().verdicts.size());
    LabelMatrix out(static_cast<Eigen::Index>(frames.size()), width);
    for (std::size_t k = 0; k < frames.size(); ++k) {
        for (Eigen::Index j = 0; j < width; ++j) {
            out(static_cast<Eigen::Index>(k), j) = frames[k].verdicts[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

std::vector<AlarmInterval> alarm_intervals(std::span<const DetectionFrame> frames) {
    std::vector<AlarmInterval> out;
    if (frames.empty()) return out;
    const std::size_t width = frames.front().verdicts.size();
    for (std::size_t j = 0; j < width; ++j) {
        std::size_t k = 0;
        while (k < frames.size()) {
            if (frames[k].verdicts[j] == 0) {
                ++k;
                continue;
            }
            AlarmInterval a{j, frames[k].time_tag, frames[k].time_tag};
            while (k < frames.size() && frames[k].verdicts[j] != 0) a.end = frames[k++].time_tag;
            out.push_back(a);
        }
    }
    return out;
}

void write_detection_csv(std::ostream& out, std::span<const DetectionFrame> frames) {
    const std::size_t width = frames.empty() ? 0 : frames.front().verdicts.size();
    out << "t";
    for (std::size_t j = 0; j < width; ++j) out << ",v" << j + 1;
    for (std::size_t j = 0; j < width; ++j) out << ",raw" << j + 1;
    out << "\n";
    for (const auto& f : frames) {
        out << text::format_sig9(f.time_tag);
        for (const auto v : f.verdicts) out << ',' << static_cast<int>(v);
        for (const auto r : f.raw_outputs) out << ',' << text::format_sig9(r);
        out << "\n";
    }
}

void write_alarm_summary(std::ostream& out, std::span<const AlarmInterval> alarms) {
    if (alarms.empty()) {
        out << "no PMU flagged\n";
        return;
    }
    for (const auto& a : alarms) {
        out << "PMU" << a.pmu + 1 << " flagged from " << text::format_sig9(a.start) << " s to "
            << text::format_sig9(a.end) << " s\n";
    }
}

std::string format_attacked(std::span<const std::size_t> attacked) {
    if (attacked.empty()) return "none";
    std::string s;
    for (std::size_t i = 0; i < attacked.size(); ++i) {
        s += (i ? ", PMU" : "PMU") + std::to_string(attacked[i] + 1);
    }
    return s;
}

}  // namespace pmuguard::detect
