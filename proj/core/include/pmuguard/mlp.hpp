#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmuguard/dataset.hpp"

namespace pmuguard::mlp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Per-column min-max map applied to inputs before the first layer.
struct InputScaling {
    Vector min;
    Vector max;

    Matrix apply(const Matrix& inputs) const;
    static InputScaling fit(const Matrix& inputs);
    bool operator==(const InputScaling& other) const;
};

// Fully connected network; every layer is affine followed by the logistic
// sigmoid e^x / (e^x + 1), the output layer included.
struct MlpNetwork {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;  // weights[k] is layer_sizes[k+1] x layer_sizes[k]
    std::vector<Vector> biases;   // biases[k] has layer_sizes[k+1] entries
    std::optional<InputScaling> scaling;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t parameter_count() const;

    void validate() const;
    // Exact parameter equality.
    bool operator==(const MlpNetwork& other) const;
};

// {5, 20, 50, 20, 5}: five PMU angles in, three hidden layers, five verdicts out.
std::vector<std::size_t> default_layer_sizes();

MlpNetwork zero_network(const std::vector<std::size_t>& layer_sizes);

// Uniform in +-sqrt(6 / (fan_in + fan_out)) per layer, biases zero.
MlpNetwork initialize(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

double sigmoid(double x);

Vector forward(const MlpNetwork& net, const Vector& input);

// Rows are samples.
Matrix forward_batch(const MlpNetwork& net, const Matrix& inputs);

enum class Loss { mse, cross_entropy };

std::string to_string(Loss loss);
Loss parse_loss(std::string_view name);

// Mean over every (sample, output) cell.
double loss_value(const Matrix& outputs, const Matrix& targets, Loss loss);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    double loss = 0.0;
};

Gradients backward(const MlpNetwork& net, const Matrix& inputs, const Matrix& targets,
                   Loss loss = Loss::mse);

struct TrainConfig {
    std::size_t max_epochs = 400;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    std::size_t early_stop_patience = 20;
    std::uint64_t seed = 1;
    Loss loss = Loss::mse;
    bool minmax_scaling = false;

    void validate() const;
};

TrainConfig parse_train_config(const std::string& json_text);
TrainConfig load_train_config(const std::filesystem::path& path);
std::string dump_train_config(const TrainConfig& cfg);

struct SplitAccuracy {
    double per_cell = 0.0;    // % of (sample, PMU) cells right at threshold 0.5
    double per_sample = 0.0;  // % of samples with every PMU right
};

struct TrainReport {
    std::size_t epochs_run = 0;
    std::size_t best_epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
    std::optional<double> test_loss;
    SplitAccuracy train_accuracy;
    SplitAccuracy validation_accuracy;
    std::optional<SplitAccuracy> test_accuracy;
    std::vector<double> train_loss_curve;
    std::vector<double> validation_loss_curve;
};

struct TrainResult {
    MlpNetwork network;
    TrainReport report;
};

// Inputs and targets as matrices, rows = samples. Targets >= 0.5 count as
// positives when scoring accuracy.
struct Samples {
    Matrix inputs;
    Matrix targets;

    std::size_t rows() const { return static_cast<std::size_t>(inputs.rows()); }
    static Samples from(const data::LabeledDataset& ds);
};

SplitAccuracy accuracy(const MlpNetwork& net, const data::LabeledDataset& ds, double threshold = 0.5);
SplitAccuracy accuracy(const MlpNetwork& net, const Samples& data, double threshold = 0.5);

// Adam on shuffled mini-batches with early stopping on validation loss. The
// returned network holds the parameters of the best validation epoch.
TrainResult train(const MlpNetwork& initial, const Samples& train_ds, const Samples& validation_ds,
                  const TrainConfig& cfg, const Samples* test_ds = nullptr);
TrainResult train(const MlpNetwork& initial, const data::LabeledDataset& train_ds,
                  const data::LabeledDataset& validation_ds, const TrainConfig& cfg,
                  const data::LabeledDataset* test_ds = nullptr);

// Seeds the initial weights from cfg.seed.
TrainResult train(const std::vector<std::size_t>& layer_sizes, const data::LabeledDataset& train_ds,
                  const data::LabeledDataset& validation_ds, const TrainConfig& cfg,
                  const data::LabeledDataset* test_ds = nullptr);

std::string format_report(const TrainReport& report);

// A network plus run metadata persisted next to it.
struct Checkpoint {
    MlpNetwork network;
    std::optional<double> alpha;  // normalizer threshold chosen on validation data

    bool operator==(const Checkpoint&) const = default;
};

// Text format with hex-float parameters; byte-identical for identical inputs.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in,
                           const std::optional<std::vector<std::size_t>>& expected_layers = std::nullopt);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<std::vector<std::size_t>>& expected_layers = std::nullopt);

}  // namespace pmuguard::mlp
