#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pmuguard::grid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Decentralized linear grid model
//
//   x_i' = A_i x_i + B_i u_i + sum_{j != i} H_ij x_j + w_i
//   z_i  = C_i x_i + sum_{j != i} L_ij x_j + xi_i
//
// h_blocks and l_blocks are N x N tables; diagonal entries are ignored and
// may be left empty. Every off-diagonal entry must be conformable.
struct GridModel {
    std::size_t n_subsystems = 0;
    std::vector<Matrix> a_blocks;
    std::vector<Matrix> b_blocks;
    std::vector<std::vector<Matrix>> h_blocks;
    std::vector<Matrix> c_blocks;
    std::vector<std::vector<Matrix>> l_blocks;
    Vector process_noise_std;      // one entry per full-system state
    Vector measurement_noise_std;  // one entry per full-system output [rad]
    double nominal_frequency = 0.0;  // omega [rad/s]
    Vector nominal_input;          // per-subsystem input magnitude, used to size load steps

    std::size_t state_dim() const;
    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t state_offset(std::size_t subsystem) const;

    // Throws DimensionError naming the offending block, or ConfigError for
    // negative noise / unstable dynamics.
    void validate() const;
};

struct FullSystem {
    Matrix a;
    Matrix b;
    Matrix c;
};

FullSystem assemble_full_system(const GridModel& model);

struct DiscreteSystem {
    Matrix a;
    Matrix b;
};

// Exact zero-order-hold discretization via the augmented matrix exponential
// exp([[A, B], [0, 0]] dt) = [[A_d, B_d], [0, I]].
DiscreteSystem discretize(const Matrix& a, const Matrix& b, double dt);

// Largest real part over the eigenvalues of A_full.
double spectral_abscissa(const Matrix& a);

// Linearized swing-equation surrogate. Per generator the state is
// [angle deviation, speed deviation] and
//   d(angle)/dt = speed
//   d(speed)/dt = (omega_s / 2H_i) (u_i - D_i speed - sum_j K_ij (angle_i - angle_j))
struct SwingParameters {
    std::vector<double> inertia;  // H_i [s]
    std::vector<double> damping;  // D_i [pu]
    Matrix synchronizing;         // K, symmetric, nonnegative, zero diagonal
    double nominal_frequency = 0.0;
    std::vector<double> nominal_input;
    double process_noise_std = 0.0;
    double measurement_noise_std = 0.0;
};

GridModel build_swing_model(const SwingParameters& params);

// Five-generator default shipped with the project (configs/model_default.json
// holds the same values).
SwingParameters default_swing_parameters();

SwingParameters parse_swing_parameters(const std::string& json_text);
SwingParameters load_swing_parameters(const std::filesystem::path& path);
std::string dump_swing_parameters(const SwingParameters& params);

struct InputBreakpoint {
    double time = 0.0;  // [s]
    Vector value;       // u for every subsystem, held until the next breakpoint
};

struct SimConfig {
    double sample_rate = 50.0;  // samples/s
    double duration = 10.0;     // s
    std::uint64_t seed = 0;
    Vector initial_state;       // empty means zero
    std::vector<InputBreakpoint> input_schedule;  // u = 0 before the first breakpoint

    std::size_t sample_count() const;
    void validate(const GridModel& model) const;
};

// Rows are sample instants.
struct Trajectory {
    std::vector<double> time_tags;
    Matrix states;        // may have zero columns when read back from CSV
    Matrix measurements;  // one column per PMU [rad]

    std::size_t size() const { return time_tags.size(); }
    std::size_t pmu_count() const { return static_cast<std::size_t>(measurements.cols()); }
};

Vector input_at(const SimConfig& cfg, std::size_t input_dim, double t);

Trajectory simulate(const GridModel& model, const SimConfig& cfg);

// CSV with header t,pmu1,...,pmuN and 9 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace pmuguard::grid
