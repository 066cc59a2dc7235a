#include "pmuguard/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "pmuguard/error.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::attack {

std::string to_string(Waveform w) {
    switch (w) {
        case Waveform::step: return "step";
        case Waveform::ramp: return "ramp";
        case Waveform::pulse: return "pulse";
    }
    return "?";
}

Waveform parse_waveform(std::string_view name) {
    if (name == "step") return Waveform::step;
    if (name == "ramp") return Waveform::ramp;
    if (name == "pulse") return Waveform::pulse;
    throw ConfigError("unknown waveform '" + std::string(name) + "'");
}

void AttackScenario::validate(std::size_t n_pmu, double duration) const {
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        const std::string where = "attack profile " + std::to_string(i + 1);
        if (p.pmu_index >= n_pmu) {
            throw DimensionError(where + ": pmu_index " + std::to_string(p.pmu_index) +
                                 " out of range for " + std::to_string(n_pmu) + " PMUs");
        }
        if (!(p.start >= 0.0) || !(p.start < p.end) || !(p.end <= duration)) {
            throw ConfigError(where + ": need 0 <= start < end <= " + text::format_sig9(duration));
        }
        if (!std::isfinite(p.magnitude)) throw ConfigError(where + ": magnitude must be finite");
        if (p.waveform == Waveform::ramp && !(std::isfinite(p.ramp_rate) && p.ramp_rate >= 0.0)) {
            throw ConfigError(where + ": ramp_rate must be finite and >= 0");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& q = profiles[j];
            if (q.pmu_index == p.pmu_index && p.start < q.end && q.start < p.end) {
                throw ConfigError(where + " overlaps profile " + std::to_string(j + 1) + " on PMU " +
                                  std::to_string(p.pmu_index + 1));
            }
        }
    }
}

double theta_at(const AttackProfile& profile, double t) {
    if (t < profile.start || t >= profile.end) return 0.0;
    switch (profile.waveform) {
        case Waveform::step:
        case Waveform::pulse:
            return profile.magnitude;
        case Waveform::ramp: {
            const double rising = profile.ramp_rate * (t - profile.start);
            return profile.magnitude >= 0.0 ? std::min(profile.magnitude, rising)
                                             : std::max(profile.magnitude, -rising);
        }
    }
    return 0.0;
}

double offset_at(const AttackScenario& scenario, std::size_t pmu, double t) {
    // Profiles on one PMU never overlap, so at most one term is nonzero.
    for (const auto& p : scenario.profiles) {
        if (p.pmu_index == pmu && t >= p.start && t < p.end) return theta_at(p, t);
    }
    return 0.0;
}

grid::Matrix offset_table(const AttackScenario& scenario, std::span<const double> time_tags,
                          std::size_t n_pmu) {
    grid::Matrix out(static_cast<Eigen::Index>(time_tags.size()), static_cast<Eigen::Index>(n_pmu));
    for (std::size_t k = 0; k < time_tags.size(); ++k) {
        for (std::size_t j = 0; j < n_pmu; ++j) {
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                offset_at(scenario, j, time_tags[k]);
        }
    }
    return out;
}

Injection inject(const grid::Trajectory& traj, const AttackScenario& scenario) {
    const std::size_t n_pmu = traj.pmu_count();
    for (const auto& p : scenario.profiles) {
        if (p.pmu_index >= n_pmu) {
            throw DimensionError("attack targets PMU index " + std::to_string(p.pmu_index) + " but only " +
                                 std::to_string(n_pmu) + " PMUs exist");
        }
    }
    Injection out{traj, LabelMatrix::Zero(static_cast<Eigen::Index>(traj.size()),
                                          static_cast<Eigen::Index>(n_pmu))};
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        for (std::size_t j = 0; j < n_pmu; ++j) {
            const double theta = offset_at(scenario, j, traj.time_tags[k]);
            if (theta == 0.0) continue;
            const auto col = static_cast<Eigen::Index>(j);
            out.trajectory.measurements(row, col) += theta;
            out.labels(row, col) = 1;
        }
    }
    return out;
}

std::vector<double> reconstruct_waveform(double magnitude, double phase, double omega,
                                         std::span<const double> times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (const double t : times) out.push_back(magnitude * std::sin(omega * t + phase));
    return out;
}

double envelope(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double sum_sq = 0.0;
    for (const double s : samples) sum_sq += s * s;
    return std::sqrt(2.0 * sum_sq / static_cast<double>(samples.size()));
}

void GeneratorConfig::validate() const {
    if (!(magnitude_min > 0.0) || !(magnitude_min <= magnitude_max) || !std::isfinite(magnitude_max)) {
        throw ConfigError("attack generator: need 0 < magnitude_min <= magnitude_max");
    }
    if (min_attacked == 0 || min_attacked > max_attacked) {
        throw ConfigError("attack generator: need 1 <= min_attacked <= max_attacked");
    }
    if (!(min_span > 0.0) || !(min_span <= max_span) || !(pulse_min_span > 0.0) ||
        !(pulse_min_span <= pulse_max_span)) {
        throw ConfigError("attack generator: span ranges must be positive and ordered");
    }
    if (!(ramp_rate_min > 0.0) || !(ramp_rate_min <= ramp_rate_max)) {
        throw ConfigError("attack generator: ramp rate range must be positive and ordered");
    }
}

AttackScenario random_scenario(const GeneratorConfig& cfg, std::size_t n_pmu, double duration,
                               std::mt19937_64& rng) {
    cfg.validate();
    AttackScenario scenario;
    const std::size_t hi = std::min(cfg.max_attacked, n_pmu);
    const std::size_t lo = std::min(cfg.min_attacked, hi);
    std::uniform_int_distribution<std::size_t> count_dist(lo, hi);
    const std::size_t count = count_dist(rng);

    std::vector<std::size_t> pmus(n_pmu);
    std::iota(pmus.begin(), pmus.end(), std::size_t{0});
    std::shuffle(pmus.begin(), pmus.end(), rng);
    pmus.resize(count);
    std::sort(pmus.begin(), pmus.end());

    auto uniform = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    std::uniform_int_distribution<int> shape_dist(0, 2);
    for (const std::size_t pmu : pmus) {
        AttackProfile p;
        p.pmu_index = pmu;
        p.waveform = static_cast<Waveform>(shape_dist(rng));
        double span = p.waveform == Waveform::pulse ? uniform(cfg.pulse_min_span, cfg.pulse_max_span)
                                                    : uniform(cfg.min_span, cfg.max_span);
        span = std::min(span, duration);
        p.start = uniform(0.0, duration - span);
        p.end = p.start + span;
        p.magnitude = uniform(cfg.magnitude_min, cfg.magnitude_max);
        if (p.waveform == Waveform::ramp) p.ramp_rate = uniform(cfg.ramp_rate_min, cfg.ramp_rate_max);
        scenario.profiles.push_back(p);
    }
    return scenario;
}

AttackScenario parse_scenario(const std::string& json_text) {
    const auto j = text::parse_config(json_text, "pmuguard-scenario", 1);
    try {
        AttackScenario s;
        s.id = j.value("id", std::string{});
        for (const auto& item : j.at("profiles")) {
            AttackProfile p;
            const auto pmu = item.at("pmu").get<std::int64_t>();
            if (pmu < 1) throw ConfigError("scenario: pmu ids are 1-based");
            p.pmu_index = static_cast<std::size_t>(pmu - 1);
            p.waveform = parse_waveform(item.at("waveform").get<std::string>());
            p.start = item.at("start").get<double>();
            p.end = item.at("end").get<double>();
            p.magnitude = item.at("magnitude").get<double>();
            p.ramp_rate = item.value("ramp_rate", 0.0);
            s.profiles.push_back(p);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
}

AttackScenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(text::read_file(path.string()));
}

std::string dump_scenario(const AttackScenario& scenario) {
    nlohmann::ordered_json j;
    j["format"] = "pmuguard-scenario";
    j["version"] = 1;
    j["id"] = scenario.id;
    j["profiles"] = nlohmann::ordered_json::array();
    for (const auto& p : scenario.profiles) {
        nlohmann::ordered_json item;
        item["pmu"] = p.pmu_index + 1;
        item["waveform"] = to_string(p.waveform);
        item["start"] = p.start;
        item["end"] = p.end;
        item["magnitude"] = p.magnitude;
        item["ramp_rate"] = p.ramp_rate;
        j["profiles"].push_back(item);
    }
    return j.dump(2) + "\n";
}

GeneratorConfig parse_generator_config(const nlohmann::json& j) {
    GeneratorConfig c;
    try {
        c.magnitude_min = j.value("magnitude_min", c.magnitude_min);
        c.magnitude_max = j.value("magnitude_max", c.magnitude_max);
        c.min_attacked = j.value("min_attacked", c.min_attacked);
        c.max_attacked = j.value("max_attacked", c.max_attacked);
        c.min_span = j.value("min_span", c.min_span);
        c.max_span = j.value("max_span", c.max_span);
        c.pulse_min_span = j.value("pulse_min_span", c.pulse_min_span);
        c.pulse_max_span = j.value("pulse_max_span", c.pulse_max_span);
        c.ramp_rate_min = j.value("ramp_rate_min", c.ramp_rate_min);
        c.ramp_rate_max = j.value("ramp_rate_max", c.ramp_rate_max);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("attack generator config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json generator_config_json(const GeneratorConfig& c) {
    nlohmann::ordered_json j;
    j["magnitude_min"] = c.magnitude_min;
    j["magnitude_max"] = c.magnitude_max;
    j["min_attacked"] = c.min_attacked;
    j["max_attacked"] = c.max_attacked;
    j["min_span"] = c.min_span;
    j["max_span"] = c.max_span;
    j["pulse_min_span"] = c.pulse_min_span;
    j["pulse_max_span"] = c.pulse_max_span;
    j["ramp_rate_min"] = c.ramp_rate_min;
    j["ramp_rate_max"] = c.ramp_rate_max;
    return j;
}

void write_label_csv(std::ostream& out, std::span<const double> time_tags, const LabelMatrix& labels) {
    if (static_cast<std::size_t>(labels.rows()) != time_tags.size()) {
        throw DimensionError("label rows do not match time tags");
    }
    out << "t";
    for (Eigen::Index j = 0; j < labels.cols(); ++j) out << ",y" << j + 1;
    out << "\n";
    for (std::size_t k = 0; k < time_tags.size(); ++k) {
        out << text::format_sig9(time_tags[k]);
        for (Eigen::Index j = 0; j < labels.cols(); ++j) {
            out << ',' << static_cast<int>(labels(static_cast<Eigen::Index>(k), j));
        }
        out << "\n";
    }
}

}  // namespace pmuguard::attack
