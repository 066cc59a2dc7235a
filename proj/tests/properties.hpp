#pragma once

// Randomized property checks shared by the unit tests (a few cases) and the
// acceptance binary (the full counts). Each returns an empty string on
// success and a description of the first violation otherwise.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pmuguard/attack.hpp"
#include "pmuguard/detector.hpp"
#include "pmuguard/grid_sim.hpp"

namespace props {

using namespace pmuguard;

// Synthetic trajectory: n_pmu angle channels plus two state columns, random
// values, uniform time grid at `rate`.
inline grid::Trajectory random_trajectory(std::size_t n_pmu, std::size_t samples, double rate, std::mt19937_64& rng) {
    grid::Trajectory t;
    for (std::size_t k = 0; k < samples; ++k) t.time_tags.push_back(static_cast<double>(k) / rate);
    t.measurements = oracle::random_matrix(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(n_pmu), rng, 1.0);
    t.states = oracle::random_matrix(static_cast<Eigen::Index>(samples), 2, rng, 1.0);
    return t;
}

// Magnitude invariance, label soundness, simultaneity, empty-scenario identity.
inline std::string check_attack_case(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pmus(1, 8), samples(20, 300);
    const std::size_t n_pmu = pmus(rng);
    const double rate = 50.0;
    const auto traj = random_trajectory(n_pmu, samples(rng), rate, rng);
    const double duration = static_cast<double>(traj.size()) / rate;

    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto scenario = attack::random_scenario({}, n_pmu, duration, rng);
    for (auto& p : scenario.profiles) {
        if (u(rng) < 0.3) p.magnitude = -p.magnitude;  // negative offsets too
    }
    scenario.validate(n_pmu, duration);
    const auto inj = attack::inject(traj, scenario);

    if (inj.trajectory.time_tags != traj.time_tags) return "time tags changed";
    if (inj.trajectory.states != traj.states) return "states changed";

    // One cycle at 60 Hz sampled uniformly at 64 points.
    const double omega = 2.0 * std::numbers::pi * 60.0;
    std::vector<double> cycle;
    for (int i = 0; i < 64; ++i) cycle.push_back(i / (64.0 * 60.0));
    const double amplitude = 0.5 + u(rng);

    for (Eigen::Index k = 0; k < inj.labels.rows(); ++k) {
        for (Eigen::Index j = 0; j < inj.labels.cols(); ++j) {
            const double before = traj.measurements(k, j), after = inj.trajectory.measurements(k, j);
            const double theta = attack::offset_at(scenario, static_cast<std::size_t>(j), traj.time_tags[static_cast<std::size_t>(k)]);
            if (after != before + theta) return "channel is not angle + offset";
            if ((inj.labels(k, j) == 1) != (theta != 0.0)) return "label disagrees with offset";
            if (inj.labels(k, j) > 1) return "label not binary";
            const double env_before = attack::envelope(attack::reconstruct_waveform(amplitude, before, omega, cycle));
            const double env_after = attack::envelope(attack::reconstruct_waveform(amplitude, after, omega, cycle));
            if (std::abs(env_before - env_after) > 1e-12 * amplitude) return "phasor amplitude changed";
        }
    }

    // A PMU carries at most one active profile at any instant.
    for (const double t : traj.time_tags) {
        for (std::size_t j = 0; j < n_pmu; ++j) {
            int active = 0;
            for (const auto& p : scenario.profiles) active += p.pmu_index == j && t >= p.start && t < p.end;
            if (active > 1) return "two profiles active on one PMU";
        }
    }

    const auto same = attack::inject(traj, attack::AttackScenario{});
    if (same.trajectory.measurements != traj.measurements || same.trajectory.states != traj.states ||
        same.trajectory.time_tags != traj.time_tags) {
        return "empty scenario altered the trajectory";
    }
    if (same.labels.size() != traj.measurements.size() || (same.labels.array() != 0).any()) return "empty scenario produced labels";
    return {};
}

struct NormalizerGridResult {
    std::size_t pairs = 0;
    std::size_t failures = 0;
    std::string first_failure;
};

// 100 x 100 (y, alpha) grid: y over [0, 1], alpha over (0, 1).
inline NormalizerGridResult check_normalizer_grid() {
    NormalizerGridResult r;
    auto fail = [&](const std::string& what) {
        if (r.failures++ == 0) r.first_failure = what;
    };
    const int n = 100;
    for (int a = 0; a < n; ++a) {
        const double alpha = (a + 0.5) / n;
        const double next_alpha = (a + 1.5) / n;
        for (int i = 0; i < n; ++i) {
            const double y = i / (n - 1.0);
            ++r.pairs;
            const std::vector<double> in{y};
            const auto v = detect::normalize(in, {alpha});
            if (v[0] != (y >= alpha ? 1 : 0)) fail("step value wrong");
            const std::vector<double> as_double{static_cast<double>(v[0])};
            if (detect::normalize(as_double, {alpha}) != v) fail("not idempotent");
            if (a + 1 < n && detect::normalize(in, {next_alpha})[0] > v[0]) fail("raising alpha added a verdict");
        }
        const std::vector<double> boundary{alpha};
        if (detect::normalize(boundary, {alpha})[0] != 1) fail("y == alpha did not map to 1");
    }
    return r;
}

}  // namespace props
