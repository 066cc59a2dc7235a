#include "pmuguard/grid_sim.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "pmuguard/error.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::grid {

namespace {

std::string block_name(const char* kind, std::size_t i, std::size_t j) {
    std::ostringstream ss;
    ss << kind << "(" << i + 1 << "," << j + 1 << ")";
    return ss.str();
}

std::string shape(const Matrix& m) {
    std::ostringstream ss;
    ss << m.rows() << "x" << m.cols();
    return ss.str();
}

bool implicit_zero(const Matrix& m) { return m.size() == 0; }

void check_dimensions(const GridModel& m) {
    const std::size_t n = m.n_subsystems;
    if (n == 0) throw DimensionError("grid model has no subsystems");
    if (m.a_blocks.size() != n || m.b_blocks.size() != n || m.c_blocks.size() != n) {
        throw DimensionError("A/B/C block lists must each hold n_subsystems entries");
    }
    if (m.h_blocks.size() != n || m.l_blocks.size() != n) {
        throw DimensionError("H/L block tables must be n_subsystems x n_subsystems");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = m.a_blocks[i];
        if (a.rows() == 0 || a.rows() != a.cols()) {
            throw DimensionError(block_name("A", i, i) + " must be square and nonempty, got " + shape(a));
        }
        if (m.b_blocks[i].rows() != a.rows()) {
            throw DimensionError(block_name("B", i, i) + " has " + shape(m.b_blocks[i]) +
                                 ", expected " + std::to_string(a.rows()) + " rows");
        }
        if (m.c_blocks[i].cols() != a.rows()) {
            throw DimensionError(block_name("C", i, i) + " has " + shape(m.c_blocks[i]) +
                                 ", expected " + std::to_string(a.rows()) + " columns");
        }
        if (m.h_blocks[i].size() != n || m.l_blocks[i].size() != n) {
            throw DimensionError("H/L row " + std::to_string(i + 1) + " must hold n_subsystems blocks");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto nj = m.a_blocks[j].rows();
            const auto& h = m.h_blocks[i][j];
            if (!implicit_zero(h) && (h.rows() != m.a_blocks[i].rows() || h.cols() != nj)) {
                throw DimensionError(block_name("H", i, j) + " has " + shape(h) + ", expected " +
                                     std::to_string(m.a_blocks[i].rows()) + "x" + std::to_string(nj));
            }
            const auto& l = m.l_blocks[i][j];
            if (!implicit_zero(l) && (l.rows() != m.c_blocks[i].rows() || l.cols() != nj)) {
                throw DimensionError(block_name("L", i, j) + " has " + shape(l) + ", expected " +
                                     std::to_string(m.c_blocks[i].rows()) + "x" + std::to_string(nj));
            }
        }
    }
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NumericError(std::string(what) + " contains non-finite entries");
}

}  // namespace

std::size_t GridModel::state_dim() const {
    std::size_t d = 0;
    for (const auto& a : a_blocks) d += static_cast<std::size_t>(a.rows());
    return d;
}

std::size_t GridModel::input_dim() const {
    std::size_t d = 0;
    for (const auto& b : b_blocks) d += static_cast<std::size_t>(b.cols());
    return d;
}

std::size_t GridModel::output_dim() const {
    std::size_t d = 0;
    for (const auto& c : c_blocks) d += static_cast<std::size_t>(c.rows());
    return d;
}

std::size_t GridModel::state_offset(std::size_t subsystem) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < subsystem; ++i) d += static_cast<std::size_t>(a_blocks[i].rows());
    return d;
}

void GridModel::validate() const {
    check_dimensions(*this);
    if (static_cast<std::size_t>(process_noise_std.size()) != state_dim()) {
        throw DimensionError("process_noise_std needs one entry per state");
    }
    if (static_cast<std::size_t>(measurement_noise_std.size()) != output_dim()) {
        throw DimensionError("measurement_noise_std needs one entry per output");
    }
    if (nominal_input.size() != 0 && static_cast<std::size_t>(nominal_input.size()) != input_dim()) {
        throw DimensionError("nominal_input needs one entry per input");
    }
    if ((process_noise_std.array() < 0.0).any() || (measurement_noise_std.array() < 0.0).any() ||
        !process_noise_std.allFinite() || !measurement_noise_std.allFinite()) {
        throw ConfigError("noise standard deviations must be finite and >= 0");
    }
    const auto full = assemble_full_system(*this);
    require_finite(full.a, "A_full");
    const double abscissa = spectral_abscissa(full.a);
    if (abscissa > 1e-9) {
        throw ConfigError("A_full is unstable: max eigenvalue real part " + text::format_sig9(abscissa));
    }
}

FullSystem assemble_full_system(const GridModel& model) {
    check_dimensions(model);
    const std::size_t n = model.n_subsystems;
    const auto ns = static_cast<Eigen::Index>(model.state_dim());
    const auto nu = static_cast<Eigen::Index>(model.input_dim());
    const auto nz = static_cast<Eigen::Index>(model.output_dim());

    FullSystem fs{Matrix::Zero(ns, ns), Matrix::Zero(ns, nu), Matrix::Zero(nz, ns)};
    Eigen::Index row = 0, in_col = 0, out_row = 0;
    std::vector<Eigen::Index> offset(n);
    for (std::size_t j = 0; j < n; ++j) {
        offset[j] = row;
        row += model.a_blocks[j].rows();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto ni = model.a_blocks[i].rows();
        const auto mi = model.b_blocks[i].cols();
        const auto pi = model.c_blocks[i].rows();
        fs.a.block(offset[i], offset[i], ni, ni) = model.a_blocks[i];
        fs.b.block(offset[i], in_col, ni, mi) = model.b_blocks[i];
        fs.c.block(out_row, offset[i], pi, ni) = model.c_blocks[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto nj = model.a_blocks[j].rows();
            if (!implicit_zero(model.h_blocks[i][j])) {
                fs.a.block(offset[i], offset[j], ni, nj) = model.h_blocks[i][j];
            }
            if (!implicit_zero(model.l_blocks[i][j])) {
                fs.c.block(out_row, offset[j], pi, nj) = model.l_blocks[i][j];
            }
        }
        in_col += mi;
        out_row += pi;
    }
    return fs;
}

DiscreteSystem discretize(const Matrix& a, const Matrix& b, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("discretize: dt must be > 0");
    if (a.rows() != a.cols() || b.rows() != a.rows()) {
        throw DimensionError("discretize: A must be square and B must share its row count");
    }
    require_finite(a, "discretize: A");
    require_finite(b, "discretize: B");

    const auto n = a.rows();
    const auto m = b.cols();
    Matrix aug = Matrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = a * dt;
    aug.topRightCorner(n, m) = b * dt;
    const Matrix e = aug.exp();
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

double spectral_abscissa(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solve failed");
    return solver.eigenvalues().real().maxCoeff();
}

GridModel build_swing_model(const SwingParameters& p) {
    const std::size_t n = p.inertia.size();
    if (n == 0) throw ConfigError("swing model needs at least one generator");
    if (p.damping.size() != n || static_cast<std::size_t>(p.synchronizing.rows()) != n ||
        static_cast<std::size_t>(p.synchronizing.cols()) != n) {
        throw DimensionError("inertia, damping and synchronizing sizes disagree");
    }
    if (!p.nominal_input.empty() && p.nominal_input.size() != n) {
        throw DimensionError("nominal_input needs one entry per generator");
    }
    if (!(p.nominal_frequency > 0.0)) throw ConfigError("nominal_frequency must be > 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p.inertia[i] > 0.0)) throw ConfigError("inertia must be > 0");
        if (!(p.damping[i] >= 0.0)) throw ConfigError("damping must be >= 0");
        for (std::size_t j = 0; j < n; ++j) {
            const double k = p.synchronizing(i, j);
            if (i == j && k != 0.0) throw ConfigError("synchronizing matrix must have a zero diagonal");
            if (!(k >= 0.0) || k != p.synchronizing(j, i)) {
                throw ConfigError("synchronizing matrix must be symmetric and nonnegative");
            }
        }
    }

    GridModel m;
    m.n_subsystems = n;
    m.nominal_frequency = p.nominal_frequency;
    m.h_blocks.assign(n, std::vector<Matrix>(n));
    m.l_blocks.assign(n, std::vector<Matrix>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double gain = p.nominal_frequency / (2.0 * p.inertia[i]);
        const double k_sum = p.synchronizing.row(static_cast<Eigen::Index>(i)).sum();
        Matrix a(2, 2);
        a << 0.0, 1.0, -gain * k_sum, -gain * p.damping[i];
        Matrix b(2, 1);
        b << 0.0, gain;
        Matrix c(1, 2);
        c << 1.0, 0.0;
        m.a_blocks.push_back(a);
        m.b_blocks.push_back(b);
        m.c_blocks.push_back(c);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            Matrix h = Matrix::Zero(2, 2);
            h(1, 0) = gain * p.synchronizing(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            m.h_blocks[i][j] = h;
            m.l_blocks[i][j] = Matrix::Zero(1, 2);
        }
    }
    m.process_noise_std = Vector::Constant(static_cast<Eigen::Index>(2 * n), p.process_noise_std);
    m.measurement_noise_std = Vector::Constant(static_cast<Eigen::Index>(n), p.measurement_noise_std);
    m.nominal_input = p.nominal_input.empty()
                          ? Vector::Ones(static_cast<Eigen::Index>(n))
                          : Vector(Eigen::Map<const Vector>(p.nominal_input.data(),
                                                            static_cast<Eigen::Index>(n)));
    return m;
}

SwingParameters default_swing_parameters() {
    SwingParameters p;
    p.nominal_frequency = 2.0 * std::numbers::pi * 60.0;
    p.inertia = {5.1, 6.4, 6.0, 4.8, 4.2};
    p.damping = {2.0, 1.5, 1.4, 1.2, 1.0};
    p.synchronizing.resize(5, 5);
    // Generator buses 1, 2, 3, 6, 8 of the 14-bus case; values are a
    // documented surrogate for the Kron-reduced coupling.
    p.synchronizing << 0.0, 1.6, 0.4, 0.3, 0.2,
                       1.6, 0.0, 1.1, 0.5, 0.4,
                       0.4, 1.1, 0.0, 0.3, 0.6,
                       0.3, 0.5, 0.3, 0.0, 0.8,
                       0.2, 0.4, 0.6, 0.8, 0.0;
    p.nominal_input = {1.0, 0.4, 0.3, 0.25, 0.25};
    p.process_noise_std = 0.0;
    p.measurement_noise_std = 0.01;
    return p;
}

SwingParameters parse_swing_parameters(const std::string& json_text) {
    const auto j = text::parse_config(json_text, "pmuguard-model", 1);
    try {
        SwingParameters p;
        p.nominal_frequency = j.at("nominal_frequency").get<double>();
        p.inertia = j.at("inertia").get<std::vector<double>>();
        p.damping = j.at("damping").get<std::vector<double>>();
        const auto k = j.at("synchronizing").get<std::vector<std::vector<double>>>();
        const auto n = static_cast<Eigen::Index>(k.size());
        p.synchronizing.resize(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (static_cast<Eigen::Index>(k[r].size()) != n) {
                throw ConfigError("synchronizing matrix must be square");
            }
            for (Eigen::Index c = 0; c < n; ++c) p.synchronizing(r, c) = k[r][c];
        }
        p.nominal_input = j.value("nominal_input", std::vector<double>{});
        p.process_noise_std = j.value("process_noise_std", 0.0);
        p.measurement_noise_std = j.value("measurement_noise_std", 0.0);
        build_swing_model(p).validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
}

SwingParameters load_swing_parameters(const std::filesystem::path& path) {
    return parse_swing_parameters(text::read_file(path.string()));
}

std::string dump_swing_parameters(const SwingParameters& p) {
    nlohmann::ordered_json j;
    j["format"] = "pmuguard-model";
    j["version"] = 1;
    j["nominal_frequency"] = p.nominal_frequency;
    j["inertia"] = p.inertia;
    j["damping"] = p.damping;
    std::vector<std::vector<double>> k(static_cast<std::size_t>(p.synchronizing.rows()));
    for (Eigen::Index r = 0; r < p.synchronizing.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.synchronizing.cols(); ++c) k[r].push_back(p.synchronizing(r, c));
    }
    j["synchronizing"] = k;
    j["nominal_input"] = p.nominal_input;
    j["process_noise_std"] = p.process_noise_std;
    j["measurement_noise_std"] = p.measurement_noise_std;
    return j.dump(2) + "\n";
}

std::size_t SimConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

void SimConfig::validate(const GridModel& model) const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw ConfigError("sample_rate must be > 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be > 0");
    if (sample_count() == 0) throw ConfigError("duration * sample_rate rounds to zero samples");
    if (initial_state.size() != 0 && static_cast<std::size_t>(initial_state.size()) != model.state_dim()) {
        throw DimensionError("initial_state needs " + std::to_string(model.state_dim()) + " entries");
    }
    double prev = -1.0;
    for (const auto& bp : input_schedule) {
        if (!(bp.time > prev) || bp.time < 0.0 || bp.time > duration) {
            throw ConfigError("input schedule breakpoints must be strictly increasing within [0, duration]");
        }
        if (static_cast<std::size_t>(bp.value.size()) != model.input_dim()) {
            throw DimensionError("input breakpoint needs " + std::to_string(model.input_dim()) + " values");
        }
        prev = bp.time;
    }
}

Vector input_at(const SimConfig& cfg, std::size_t input_dim, double t) {
    Vector u = Vector::Zero(static_cast<Eigen::Index>(input_dim));
    for (const auto& bp : cfg.input_schedule) {
        if (bp.time > t) break;
        u = bp.value;
    }
    return u;
}

Trajectory simulate(const GridModel& model, const SimConfig& cfg) {
    model.validate();
    cfg.validate(model);

    const auto full = assemble_full_system(model);
    const double dt = 1.0 / cfg.sample_rate;
    const auto disc = discretize(full.a, full.b, dt);

    const std::size_t steps = cfg.sample_count();
    const auto ns = static_cast<Eigen::Index>(model.state_dim());
    const auto nz = static_cast<Eigen::Index>(model.output_dim());

    Trajectory traj;
    traj.time_tags.resize(steps);
    traj.states.resize(static_cast<Eigen::Index>(steps), ns);
    traj.measurements.resize(static_cast<Eigen::Index>(steps), nz);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vector x = cfg.initial_state.size() == 0 ? Vector::Zero(ns) : cfg.initial_state;
    Vector noise_z(nz), noise_x(ns);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        const double t = static_cast<double>(k) / cfg.sample_rate;
        for (Eigen::Index i = 0; i < ns; ++i) {
            if (!(std::abs(x[i]) <= 1e6)) {
                std::ostringstream ss;
                ss << "state blow-up at sample " << k << " (t=" << t << " s), state " << i
                   << " = " << x[i];
                throw NumericError(ss.str());
            }
        }
        for (Eigen::Index i = 0; i < nz; ++i) noise_z[i] = normal(rng);
        for (Eigen::Index i = 0; i < ns; ++i) noise_x[i] = normal(rng);

        traj.time_tags[k] = t;
        traj.states.row(row) = x.transpose();
        traj.measurements.row(row) =
            (full.c * x + model.measurement_noise_std.cwiseProduct(noise_z)).transpose();

        const Vector u = input_at(cfg, model.input_dim(), t);
        x = disc.a * x + disc.b * u + model.process_noise_std.cwiseProduct(noise_x);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t";
    for (std::size_t j = 0; j < traj.pmu_count(); ++j) out << ",pmu" << j + 1;
    out << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << text::format_sig9(traj.time_tags[k]);
        for (Eigen::Index j = 0; j < traj.measurements.cols(); ++j) {
            out << ',' << text::format_sig9(traj.measurements(static_cast<Eigen::Index>(k), j));
        }
        out << "\n";
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trajectory CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = text::split(line, ',');
    if (header.size() < 2 || header[0] != "t") throw ParseError("trajectory CSV header must start with 't'");
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j] != "pmu" + std::to_string(j)) {
            throw ParseError("unexpected trajectory column '" + std::string(header[j]) + "'");
        }
    }
    const auto n_pmu = static_cast<Eigen::Index>(header.size() - 1);

    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != header.size()) {
            throw ParseError("trajectory CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        }
        times.push_back(text::parse_number(fields[0]));
        for (std::size_t j = 1; j < fields.size(); ++j) values.push_back(text::parse_number(fields[j]));
    }
    Trajectory traj;
    traj.time_tags = std::move(times);
    const auto rows = static_cast<Eigen::Index>(traj.time_tags.size());
    traj.states.resize(rows, 0);
    traj.measurements = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), rows, n_pmu);
    return traj;
}

}  // namespace pmuguard::grid
