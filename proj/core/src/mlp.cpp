#include "pmuguard/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pmuguard/error.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::mlp {

namespace {

bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool same(const Vector& a, const Vector& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

std::string sizes_string(const std::vector<std::size_t>& sizes) {
    std::string s = "{";
    for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
    return s + "}";
}

// The sigmoid is clamped one ulp inside (0, 1) so outputs stay strictly
// inside the open interval even when exp saturates.
constexpr double kLowest = std::numeric_limits<double>::min();
const double kHighest = std::nextafter(1.0, 0.0);

Matrix activate(const Matrix& z) {
    return z.unaryExpr([](double x) { return sigmoid(x); });
}

struct Activations {
    std::vector<Matrix> values;  // values[0] = (scaled) inputs, values[k+1] = layer k output
};

Activations forward_all(const MlpNetwork& net, const Matrix& inputs) {
    Activations acts;
    acts.values.reserve(net.weights.size() + 1);
    acts.values.push_back(net.scaling ? net.scaling->apply(inputs) : inputs);
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        Matrix z = acts.values.back() * net.weights[k].transpose();
        z.rowwise() += net.biases[k].transpose();
        acts.values.push_back(activate(z));
    }
    return acts;
}

void check_inputs(const MlpNetwork& net, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != net.input_size()) {
        throw DimensionError("network expects " + std::to_string(net.input_size()) + " inputs, got " +
                             std::to_string(inputs.cols()));
    }
    if (!inputs.allFinite()) throw NumericError("network inputs must be finite");
}

}  // namespace

Matrix InputScaling::apply(const Matrix& inputs) const {
    const Vector span = (max - min).cwiseMax(1e-12);
    Matrix out = inputs.rowwise() - min.transpose();
    return out.array().rowwise() / span.transpose().array();
}

InputScaling InputScaling::fit(const Matrix& inputs) {
    return {inputs.colwise().minCoeff().transpose(), inputs.colwise().maxCoeff().transpose()};
}

bool InputScaling::operator==(const InputScaling& other) const {
    return same(min, other.min) && same(max, other.max);
}

std::size_t MlpNetwork::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        n += static_cast<std::size_t>(weights[k].size() + biases[k].size());
    }
    return n;
}

void MlpNetwork::validate() const {
    if (layer_sizes.size() < 2) throw DimensionError("network needs at least input and output layers");
    for (const auto s : layer_sizes) {
        if (s == 0) throw DimensionError("layer sizes must be positive");
    }
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
        throw DimensionError("network needs one weight matrix and bias per layer transition");
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto rows = static_cast<Eigen::Index>(layer_sizes[k + 1]);
        const auto cols = static_cast<Eigen::Index>(layer_sizes[k]);
        if (weights[k].rows() != rows || weights[k].cols() != cols || biases[k].size() != rows) {
            throw DimensionError("layer " + std::to_string(k + 1) + " parameters do not match " +
                                 sizes_string(layer_sizes));
        }
        if (!weights[k].allFinite() || !biases[k].allFinite()) {
            throw NumericError("layer " + std::to_string(k + 1) + " has non-finite parameters");
        }
    }
    if (scaling && (static_cast<std::size_t>(scaling->min.size()) != input_size() ||
                    static_cast<std::size_t>(scaling->max.size()) != input_size())) {
        throw DimensionError("input scaling width does not match the input layer");
    }
}

bool MlpNetwork::operator==(const MlpNetwork& other) const {
    if (layer_sizes != other.layer_sizes || weights.size() != other.weights.size() ||
        biases.size() != other.biases.size() || scaling != other.scaling) {
        return false;
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!same(weights[k], other.weights[k]) || !same(biases[k], other.biases[k])) return false;
    }
    return true;
}

std::vector<std::size_t> default_layer_sizes() { return {5, 20, 50, 20, 5}; }

MlpNetwork zero_network(const std::vector<std::size_t>& layer_sizes) {
    MlpNetwork net;
    net.layer_sizes = layer_sizes;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        const auto rows = static_cast<Eigen::Index>(layer_sizes[k + 1]);
        const auto cols = static_cast<Eigen::Index>(layer_sizes[k]);
        net.weights.push_back(Matrix::Zero(rows, cols));
        net.biases.push_back(Vector::Zero(rows));
    }
    net.validate();
    return net;
}

MlpNetwork initialize(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    MlpNetwork net = zero_network(layer_sizes);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(layer_sizes[k] + layer_sizes[k + 1]));
        std::uniform_real_distribution<double> dist(-limit, limit);
        auto& w = net.weights[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
        }
    }
    return net;
}

double sigmoid(double x) {
    double y;
    if (x >= 0.0) {
        y = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        y = e / (e + 1.0);
    }
    return std::clamp(y, kLowest, kHighest);
}

Vector forward(const MlpNetwork& net, const Vector& input) {
    Matrix row = input.transpose();
    return forward_batch(net, row).row(0).transpose();
}

Matrix forward_batch(const MlpNetwork& net, const Matrix& inputs) {
    check_inputs(net, inputs);
    return forward_all(net, inputs).values.back();
}

std::string to_string(Loss loss) { return loss == Loss::mse ? "mse" : "cross_entropy"; }

Loss parse_loss(std::string_view name) {
    if (name == "mse") return Loss::mse;
    if (name == "cross_entropy") return Loss::cross_entropy;
    throw ConfigError("unknown loss '" + std::string(name) + "'");
}

double loss_value(const Matrix& outputs, const Matrix& targets, Loss loss) {
    if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols() || outputs.size() == 0) {
        throw DimensionError("outputs and targets must have the same nonempty shape");
    }
    const double cells = static_cast<double>(outputs.size());
    if (loss == Loss::mse) return (outputs - targets).squaredNorm() / cells;
    const auto& y = outputs.array();
    const auto& t = targets.array();
    return -(t * y.log() + (1.0 - t) * (1.0 - y).log()).sum() / cells;
}

Gradients backward(const MlpNetwork& net, const Matrix& inputs, const Matrix& targets, Loss loss) {
    check_inputs(net, inputs);
    if (inputs.rows() == 0) throw DimensionError("backward needs a nonempty batch");
    if (targets.rows() != inputs.rows() || static_cast<std::size_t>(targets.cols()) != net.output_size()) {
        throw DimensionError("targets must be batch x " + std::to_string(net.output_size()));
    }
    const auto acts = forward_all(net, inputs);
    const Matrix& out = acts.values.back();

    Gradients g;
    g.loss = loss_value(out, targets, loss);
    if (!std::isfinite(g.loss)) throw NumericError("non-finite loss in backward pass");

    const double cells = static_cast<double>(out.size());
    // delta = dL/dz for the current layer's pre-activation.
    Matrix delta;
    if (loss == Loss::mse) {
        delta = (2.0 / cells) * (out - targets).cwiseProduct(out.cwiseProduct((1.0 - out.array()).matrix()));
    } else {
        delta = (out - targets) / cells;
    }
    const std::size_t layers = net.weights.size();
    g.weights.resize(layers);
    g.biases.resize(layers);
    for (std::size_t k = layers; k-- > 0;) {
        const Matrix& prev = acts.values[k];
        g.weights[k] = delta.transpose() * prev;
        g.biases[k] = delta.colwise().sum().transpose();
        if (k > 0) {
            delta = (delta * net.weights[k]).cwiseProduct(prev.cwiseProduct((1.0 - prev.array()).matrix()));
        }
    }
    return g;
}

void TrainConfig::validate() const {
    if (max_epochs == 0 || batch_size == 0 || early_stop_patience == 0 || !(learning_rate > 0.0)) {
        throw ConfigError("train config: epochs, batch size, patience and learning rate must be positive");
    }
}

TrainConfig parse_train_config(const std::string& json_text) {
    const auto j = text::parse_config(json_text, "pmuguard-train", 1);
    TrainConfig c;
    try {
        c.max_epochs = j.value("max_epochs", c.max_epochs);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
        c.seed = j.value("seed", c.seed);
        c.loss = parse_loss(j.value("loss", std::string("mse")));
        c.minmax_scaling = j.value("input_scaling", std::string("none")) == "minmax";
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
    c.validate();
    return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    return parse_train_config(text::read_file(path.string()));
}

std::string dump_train_config(const TrainConfig& c) {
    nlohmann::ordered_json j;
    j["format"] = "pmuguard-train";
    j["version"] = 1;
    j["max_epochs"] = c.max_epochs;
    j["batch_size"] = c.batch_size;
    j["learning_rate"] = c.learning_rate;
    j["early_stop_patience"] = c.early_stop_patience;
    j["seed"] = c.seed;
    j["loss"] = to_string(c.loss);
    j["input_scaling"] = c.minmax_scaling ? "minmax" : "none";
    return j.dump(2) + "\n";
}

Samples Samples::from(const data::LabeledDataset& ds) {
    return {ds.features, data::label_targets(ds)};
}

SplitAccuracy accuracy(const MlpNetwork& net, const data::LabeledDataset& ds, double threshold) {
    return accuracy(net, Samples::from(ds), threshold);
}

SplitAccuracy accuracy(const MlpNetwork& net, const Samples& data, double threshold) {
    if (data.rows() == 0) throw EmptyDatasetError("accuracy of an empty dataset");
    if (data.targets.rows() != data.inputs.rows()) throw DimensionError("inputs and targets differ in row count");
    const Matrix out = forward_batch(net, data.inputs);
    if (out.cols() != data.targets.cols()) throw DimensionError("targets do not match the output layer");
    std::size_t right_cells = 0, right_rows = 0;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        bool all = true;
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            const bool verdict = out(r, c) >= threshold;
            const bool ok = verdict == (data.targets(r, c) >= 0.5);
            right_cells += ok;
            all = all && ok;
        }
        right_rows += all;
    }
    return {100.0 * static_cast<double>(right_cells) / static_cast<double>(out.size()),
            100.0 * static_cast<double>(right_rows) / static_cast<double>(out.rows())};
}

namespace {

struct AdamState {
    std::vector<Matrix> mw, vw;
    std::vector<Vector> mb, vb;
    std::size_t step = 0;

    explicit AdamState(const MlpNetwork& net) {
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            mw.push_back(Matrix::Zero(net.weights[k].rows(), net.weights[k].cols()));
            vw.push_back(mw.back());
            mb.push_back(Vector::Zero(net.biases[k].size()));
            vb.push_back(mb.back());
        }
    }

    void apply(MlpNetwork& net, const Gradients& g, double lr) {
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        ++step;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            mw[k] = beta1 * mw[k] + (1.0 - beta1) * g.weights[k];
            vw[k] = beta2 * vw[k] + (1.0 - beta2) * g.weights[k].cwiseAbs2();
            net.weights[k].array() -= lr * (mw[k].array() / c1) / ((vw[k].array() / c2).sqrt() + eps);
            mb[k] = beta1 * mb[k] + (1.0 - beta1) * g.biases[k];
            vb[k] = beta2 * vb[k] + (1.0 - beta2) * g.biases[k].cwiseAbs2();
            net.biases[k].array() -= lr * (mb[k].array() / c1) / ((vb[k].array() / c2).sqrt() + eps);
        }
    }
};

void check_samples(const MlpNetwork& net, const Samples& d, const char* name) {
    if (d.rows() == 0) throw EmptyDatasetError(std::string(name) + " set is empty");
    if (d.targets.rows() != d.inputs.rows()) throw DimensionError(std::string(name) + " inputs and targets differ in row count");
    if (static_cast<std::size_t>(d.inputs.cols()) != net.input_size() ||
        static_cast<std::size_t>(d.targets.cols()) != net.output_size()) {
        throw DimensionError(std::string(name) + " set is " + std::to_string(d.inputs.cols()) + " -> " +
                             std::to_string(d.targets.cols()) + " wide but the network is " +
                             sizes_string(net.layer_sizes));
    }
}

double guarded_loss(const MlpNetwork& net, const Samples& d, Loss loss, std::size_t epoch) {
    const double v = loss_value(forward_batch(net, d.inputs), d.targets, loss);
    if (!std::isfinite(v) || v > 1e6) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": loss " +
                           text::format_sig9(v));
    }
    return v;
}

}  // namespace

TrainResult train(const MlpNetwork& initial, const Samples& train_ds, const Samples& validation_ds,
                  const TrainConfig& cfg, const Samples* test_ds) {
    cfg.validate();
    initial.validate();
    check_samples(initial, train_ds, "training");
    check_samples(initial, validation_ds, "validation");
    if (test_ds) check_samples(initial, *test_ds, "test");

    MlpNetwork net = initial;
    if (cfg.minmax_scaling) net.scaling = InputScaling::fit(train_ds.inputs);

    const Matrix& targets = train_ds.targets;
    const std::size_t n = train_ds.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Offset so the shuffle stream differs from the initialization stream.
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    AdamState adam(net);
    TrainReport report;
    MlpNetwork best = net;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;

    Matrix batch_x, batch_t;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, n - start);
            batch_x.resize(static_cast<Eigen::Index>(len), train_ds.inputs.cols());
            batch_t.resize(static_cast<Eigen::Index>(len), targets.cols());
            for (std::size_t i = 0; i < len; ++i) {
                const auto src = static_cast<Eigen::Index>(order[start + i]);
                batch_x.row(static_cast<Eigen::Index>(i)) = train_ds.inputs.row(src);
                batch_t.row(static_cast<Eigen::Index>(i)) = targets.row(src);
            }
            const auto g = backward(net, batch_x, batch_t, cfg.loss);
            if (g.loss > 1e6) throw NumericError("training diverged: batch loss " + text::format_sig9(g.loss));
            adam.apply(net, g, cfg.learning_rate);
        }
        const double train_loss = guarded_loss(net, train_ds, cfg.loss, epoch);
        const double val_loss = guarded_loss(net, validation_ds, cfg.loss, epoch);
        report.train_loss_curve.push_back(train_loss);
        report.validation_loss_curve.push_back(val_loss);
        report.epochs_run = epoch;
        if (val_loss < best_val) {
            best_val = val_loss;
            best = net;
            report.best_epoch = epoch;
            stale = 0;
        } else if (++stale >= cfg.early_stop_patience) {
            break;
        }
    }

    report.train_loss = report.train_loss_curve[report.best_epoch - 1];
    report.validation_loss = best_val;
    report.train_accuracy = accuracy(best, train_ds);
    report.validation_accuracy = accuracy(best, validation_ds);
    if (test_ds) {
        report.test_loss = loss_value(forward_batch(best, test_ds->inputs), test_ds->targets, cfg.loss);
        report.test_accuracy = accuracy(best, *test_ds);
    }
    return {std::move(best), std::move(report)};
}

TrainResult train(const MlpNetwork& initial, const data::LabeledDataset& train_ds,
                  const data::LabeledDataset& validation_ds, const TrainConfig& cfg,
                  const data::LabeledDataset* test_ds) {
    const auto test = test_ds ? std::optional<Samples>(Samples::from(*test_ds)) : std::nullopt;
    return train(initial, Samples::from(train_ds), Samples::from(validation_ds), cfg, test ? &*test : nullptr);
}

TrainResult train(const std::vector<std::size_t>& layer_sizes, const data::LabeledDataset& train_ds,
                  const data::LabeledDataset& validation_ds, const TrainConfig& cfg,
                  const data::LabeledDataset* test_ds) {
    return train(initialize(layer_sizes, cfg.seed), train_ds, validation_ds, cfg, test_ds);
}

std::string format_report(const TrainReport& r) {
    std::ostringstream ss;
    auto acc = [&ss](const char* name, const SplitAccuracy& a) {
        ss << name << " accuracy: " << text::format_sig9(a.per_cell) << " % per cell, "
           << text::format_sig9(a.per_sample) << " % per sample\n";
    };
    ss << "epochs run: " << r.epochs_run << " (best " << r.best_epoch << ")\n";
    ss << "train loss: " << text::format_sig9(r.train_loss) << "\n";
    ss << "validation loss: " << text::format_sig9(r.validation_loss) << "\n";
    if (r.test_loss) ss << "test loss: " << text::format_sig9(*r.test_loss) << "\n";
    acc("train", r.train_accuracy);
    acc("validation", r.validation_accuracy);
    if (r.test_accuracy) acc("test", *r.test_accuracy);
    return ss.str();
}

// ---------------------------------------------------------------------------
// Checkpoint text format
//
//   pmuguard-checkpoint 1
//   layers <count> <size>...
//   activation sigmoid
//   [alpha <hex>]
//   [scaling <width> <min hex>... <max hex>...]
//   layer <k> <rows> <cols>  followed by rows*cols weights then rows biases
//   end
// ---------------------------------------------------------------------------

namespace {

std::string hex(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next(const char* what) {
        std::string tok;
        if (!(in_ >> tok)) throw ParseError(std::string("checkpoint truncated while reading ") + what);
        return tok;
    }

    void expect(const std::string& word) {
        const auto tok = next(word.c_str());
        if (tok != word) throw ParseError("checkpoint: expected '" + word + "', got '" + tok + "'");
    }

    std::size_t size(const char* what) {
        const auto v = text::parse_integer(next(what));
        if (v < 0) throw ParseError(std::string("checkpoint: negative ") + what);
        return static_cast<std::size_t>(v);
    }

    double number(const char* what) {
        const double v = text::parse_number(next(what));
        if (!std::isfinite(v)) throw ParseError(std::string("checkpoint: non-finite ") + what);
        return v;
    }

private:
    std::istream& in_;
};

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    const auto& net = ckpt.network;
    net.validate();
    out << "pmuguard-checkpoint 1\n";
    out << "layers " << net.layer_sizes.size();
    for (const auto s : net.layer_sizes) out << ' ' << s;
    out << "\nactivation sigmoid\n";
    if (ckpt.alpha) out << "alpha " << hex(*ckpt.alpha) << "\n";
    if (net.scaling) {
        out << "scaling " << net.scaling->min.size() << "\n";
        for (Eigen::Index i = 0; i < net.scaling->min.size(); ++i) out << (i ? " " : "") << hex(net.scaling->min[i]);
        out << "\n";
        for (Eigen::Index i = 0; i < net.scaling->max.size(); ++i) out << (i ? " " : "") << hex(net.scaling->max[i]);
        out << "\n";
    }
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const auto& w = net.weights[k];
        out << "layer " << k + 1 << ' ' << w.rows() << ' ' << w.cols() << "\n";
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << hex(w(r, c));
            out << "\n";
        }
        for (Eigen::Index r = 0; r < net.biases[k].size(); ++r) out << (r ? " " : "") << hex(net.biases[k][r]);
        out << "\n";
    }
    out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in, const std::optional<std::vector<std::size_t>>& expected_layers) {
    TokenReader rd(in);
    rd.expect("pmuguard-checkpoint");
    if (rd.next("version") != "1") throw ParseError("unsupported checkpoint version");
    rd.expect("layers");
    const auto count = rd.size("layer count");
    if (count < 2 || count > 64) throw ParseError("checkpoint: implausible layer count");
    std::vector<std::size_t> sizes(count);
    for (auto& s : sizes) s = rd.size("layer size");
    if (expected_layers && *expected_layers != sizes) {
        throw DimensionError("checkpoint layers " + sizes_string(sizes) + " do not match expected " +
                             sizes_string(*expected_layers));
    }
    rd.expect("activation");
    if (rd.next("activation") != "sigmoid") throw ParseError("checkpoint: unsupported activation");

    Checkpoint ckpt;
    MlpNetwork net = zero_network(sizes);
    std::string tok = rd.next("section");
    if (tok == "alpha") {
        ckpt.alpha = rd.number("alpha");
        tok = rd.next("section");
    }
    if (tok == "scaling") {
        const auto width = rd.size("scaling width");
        if (width != sizes.front()) throw DimensionError("checkpoint scaling width does not match input layer");
        InputScaling sc{Vector(static_cast<Eigen::Index>(width)), Vector(static_cast<Eigen::Index>(width))};
        for (auto& v : sc.min) v = rd.number("scaling min");
        for (auto& v : sc.max) v = rd.number("scaling max");
        net.scaling = sc;
        tok = rd.next("section");
    }
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        if (tok != "layer") throw ParseError("checkpoint: expected 'layer', got '" + tok + "'");
        if (rd.size("layer index") != k + 1 || rd.size("rows") != sizes[k + 1] || rd.size("cols") != sizes[k]) {
            throw DimensionError("checkpoint layer " + std::to_string(k + 1) + " header does not match layer sizes");
        }
        auto& w = net.weights[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rd.number("weight");
        }
        for (auto& b : net.biases[k]) b = rd.number("bias");
        tok = rd.next("section");
    }
    if (tok != "end") throw ParseError("checkpoint: expected 'end', got '" + tok + "'");
    net.validate();
    ckpt.network = std::move(net);
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write checkpoint '" + path.string() + "'");
    write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<std::vector<std::size_t>>& expected_layers) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint '" + path.string() + "'");
    return read_checkpoint(in, expected_layers);
}

}  // namespace pmuguard::mlp
