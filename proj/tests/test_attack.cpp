#include <random>
#include <sstream>

#include <doctest.h>

#include "properties.hpp"
#include "pmuguard/attack.hpp"
#include "pmuguard/error.hpp"

using namespace pmuguard;
using attack::AttackProfile;
using attack::AttackScenario;
using attack::Waveform;

TEST_CASE("theta_at: step, ramp and pulse shapes") {
    const AttackProfile step{0, Waveform::step, 4.0, 8.0, 0.5, 0.0};
    CHECK(attack::theta_at(step, 3.99) == 0.0);
    CHECK(attack::theta_at(step, 4.0) == 0.5);
    CHECK(attack::theta_at(step, 6.0) == 0.5);
    CHECK(attack::theta_at(step, 8.0) == 0.0);

    const AttackProfile ramp{0, Waveform::ramp, 1.0, 9.0, 1.0, 0.2};
    CHECK(attack::theta_at(ramp, 3.0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(attack::theta_at(ramp, 1.0) == 0.0);
    CHECK(attack::theta_at(ramp, 8.5) == 1.0);  // saturated at the magnitude

    const AttackProfile down{0, Waveform::ramp, 0.0, 9.0, -0.3, 0.1};
    CHECK(attack::theta_at(down, 2.0) == doctest::Approx(-0.2));
    CHECK(attack::theta_at(down, 5.0) == doctest::Approx(-0.3));

    const AttackProfile pulse{0, Waveform::pulse, 2.0, 2.5, 0.7, 0.0};
    CHECK(attack::theta_at(pulse, 2.2) == 0.7);
    CHECK(attack::theta_at(pulse, 2.5) == 0.0);
}

TEST_CASE("inject: step on PMU 2 over [4, 8) s") {
    std::mt19937_64 rng(1);
    const auto traj = props::random_trajectory(5, 500, 50.0, rng);
    const AttackScenario s{"one", {{1, Waveform::step, 4.0, 8.0, 0.3, 0.0}}};
    const auto inj = attack::inject(traj, s);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        const bool inside = traj.time_tags[k] >= 4.0 && traj.time_tags[k] < 8.0;
        CHECK(inj.trajectory.measurements(r, 1) == traj.measurements(r, 1) + (inside ? 0.3 : 0.0));
        CHECK(inj.labels(r, 1) == (inside ? 1 : 0));
        for (const Eigen::Index j : {0, 2, 3, 4}) {
            CHECK(inj.trajectory.measurements(r, j) == traj.measurements(r, j));
            CHECK(inj.labels(r, j) == 0);
        }
    }
    CHECK(inj.labels.col(1).cast<int>().sum() == 200);
}

TEST_CASE("inject: empty scenario is the identity") {
    std::mt19937_64 rng(2);
    const auto traj = props::random_trajectory(5, 100, 50.0, rng);
    const auto inj = attack::inject(traj, {});
    CHECK(inj.trajectory.measurements == traj.measurements);
    CHECK(inj.labels.isZero());
}

TEST_CASE("inject: two disjoint windows on PMU 1 give two label blocks") {
    std::mt19937_64 rng(3);
    const auto traj = props::random_trajectory(3, 500, 50.0, rng);
    const AttackScenario s{"two", {{0, Waveform::step, 1.0, 2.0, 0.2, 0.0}, {0, Waveform::pulse, 6.0, 6.5, 0.4, 0.0}}};
    const auto labels = attack::inject(traj, s).labels;
    int blocks = 0;
    for (Eigen::Index k = 0; k < labels.rows(); ++k) blocks += labels(k, 0) == 1 && (k == 0 || labels(k - 1, 0) == 0);
    CHECK(blocks == 2);
    CHECK(labels.col(0).cast<int>().sum() == 50 + 25);
}

TEST_CASE("scenario validation") {
    AttackScenario s{"x", {{0, Waveform::step, 1.0, 3.0, 0.2, 0.0}, {0, Waveform::step, 2.0, 4.0, 0.2, 0.0}}};
    CHECK_THROWS_AS(s.validate(5, 10.0), ConfigError);  // overlap on one PMU
    s.profiles[1].pmu_index = 1;
    CHECK_NOTHROW(s.validate(5, 10.0));
    s.profiles[1].pmu_index = 5;
    CHECK_THROWS_AS(s.validate(5, 10.0), DimensionError);
    s.profiles[1] = {1, Waveform::step, 3.0, 2.0, 0.2, 0.0};
    CHECK_THROWS_AS(s.validate(5, 10.0), ConfigError);
}

TEST_CASE("random scenarios respect the generator ranges") {
    std::mt19937_64 rng(4);
    const attack::GeneratorConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const auto s = attack::random_scenario(cfg, 5, 10.0, rng);
        REQUIRE(s.profiles.size() >= 1);
        REQUIRE(s.profiles.size() <= 3);
        CHECK_NOTHROW(s.validate(5, 10.0));
        for (const auto& p : s.profiles) {
            CHECK(p.magnitude >= 0.1);
            CHECK(p.magnitude <= 1.0);
            CHECK(p.end - p.start <= 6.0 + 1e-12);
        }
    }
}

TEST_CASE("attack invariants on random scenarios") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) CHECK(props::check_attack_case(rng) == "");
}

TEST_CASE("envelope ignores the phase") {
    std::vector<double> cycle;
    for (int i = 0; i < 32; ++i) cycle.push_back(i / 32.0);
    const double omega = 2.0 * std::numbers::pi;
    CHECK(attack::envelope(attack::reconstruct_waveform(1.3, 0.0, omega, cycle)) == doctest::Approx(1.3));
    CHECK(attack::envelope(attack::reconstruct_waveform(1.3, 0.77, omega, cycle)) == doctest::Approx(1.3));
}

TEST_CASE("scenario JSON round trip uses 1-based PMU ids") {
    const AttackScenario s{"rt", {{2, Waveform::ramp, 1.0, 5.0, 0.6, 0.3}, {0, Waveform::pulse, 2.0, 2.4, 0.2, 0.0}}};
    const auto text = attack::dump_scenario(s);
    CHECK(text.find("\"pmu\": 3") != std::string::npos);
    const auto back = attack::parse_scenario(text);
    REQUIRE(back.profiles.size() == 2);
    CHECK(back.id == "rt");
    CHECK(back.profiles[0].pmu_index == 2);
    CHECK(back.profiles[0].waveform == Waveform::ramp);
    CHECK(back.profiles[0].ramp_rate == 0.3);
    CHECK(back.profiles[1].end == 2.4);
    CHECK_THROWS_AS(attack::parse_waveform("sawtooth"), ConfigError);
    CHECK_THROWS_AS(attack::parse_scenario(R"({"format":"pmuguard-scenario","version":1,"profiles":[{"pmu":0}]})"),
                    ConfigError);
}

TEST_CASE("label CSV layout") {
    const std::vector<double> t{0.0, 0.02};
    LabelMatrix y(2, 2);
    y << 0, 1, 1, 0;
    std::ostringstream out;
    attack::write_label_csv(out, t, y);
    CHECK(out.str() == "t,y1,y2\n0,0,1\n0.02,1,0\n");
}
