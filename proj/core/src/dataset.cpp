#include "pmuguard/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pmuguard/error.hpp"
#include "pmuguard/text.hpp"

namespace pmuguard::data {

void LabeledDataset::validate() const {
    const auto n = static_cast<Eigen::Index>(rows());
    if (features.rows() != n || labels.rows() != n || row_source.size() != rows()) {
        throw DimensionError("dataset columns disagree on the row count");
    }
    if (labels.cols() != features.cols()) throw DimensionError("features and labels need the same width");
    if (!features.allFinite()) throw NumericError("dataset features must be finite");
    if ((labels.array() > 1).any()) throw ConfigError("dataset labels must be 0 or 1");
    for (const auto s : row_source) {
        if (s >= sources.size()) throw DimensionError("row provenance points past the source list");
    }
}

bool LabeledDataset::operator==(const LabeledDataset& o) const {
    return time_tags == o.time_tags && features.rows() == o.features.rows() &&
           features.cols() == o.features.cols() && features == o.features && labels == o.labels &&
           sources == o.sources && row_source == o.row_source;
}

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = theta - two_pi * std::round(theta / two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

Preprocessed preprocess(const grid::Trajectory& traj, const LabelMatrix& labels,
                        const Provenance& provenance) {
    const auto n = static_cast<Eigen::Index>(traj.size());
    if (traj.measurements.rows() != n || labels.rows() != n || labels.cols() != traj.measurements.cols()) {
        throw DimensionError("trajectory and label rows are not aligned");
    }
    std::vector<Eigen::Index> keep;
    keep.reserve(traj.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        if (traj.measurements.row(k).allFinite() && std::isfinite(traj.time_tags[k])) keep.push_back(k);
    }
    if (keep.empty()) throw EmptyDatasetError("preprocess: every row was filtered out");

    Preprocessed out;
    out.dropped_rows = traj.size() - keep.size();
    auto& ds = out.dataset;
    const auto m = static_cast<Eigen::Index>(keep.size());
    ds.features.resize(m, traj.measurements.cols());
    ds.labels.resize(m, labels.cols());
    ds.time_tags.reserve(keep.size());
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto k = keep[r];
        ds.time_tags.push_back(text::quantize_sig9(traj.time_tags[k]));
        for (Eigen::Index j = 0; j < traj.measurements.cols(); ++j) {
            ds.features(r, j) = text::quantize_sig9(wrap_angle(traj.measurements(k, j)));
        }
        ds.labels.row(r) = labels.row(k);
    }
    ds.sources = {provenance};
    ds.row_source.assign(keep.size(), 0);
    ds.validate();
    return out;
}

LabeledDataset concat(std::span<const LabeledDataset> parts) {
    if (parts.empty()) throw EmptyDatasetError("concat of zero datasets");
    const auto width = parts.front().features.cols();
    Eigen::Index total = 0;
    for (const auto& p : parts) {
        if (p.features.cols() != width || p.labels.cols() != width) {
            throw DimensionError("concat: column count " + std::to_string(p.features.cols()) +
                                 " does not match " + std::to_string(width));
        }
        total += static_cast<Eigen::Index>(p.rows());
    }
    LabeledDataset out;
    out.features.resize(total, width);
    out.labels.resize(total, width);
    out.time_tags.reserve(static_cast<std::size_t>(total));
    out.row_source.reserve(static_cast<std::size_t>(total));
    Eigen::Index row = 0;
    for (const auto& p : parts) {
        const auto n = static_cast<Eigen::Index>(p.rows());
        out.features.middleRows(row, n) = p.features;
        out.labels.middleRows(row, n) = p.labels;
        out.time_tags.insert(out.time_tags.end(), p.time_tags.begin(), p.time_tags.end());
        const std::size_t base = out.sources.size();
        out.sources.insert(out.sources.end(), p.sources.begin(), p.sources.end());
        for (const auto s : p.row_source) out.row_source.push_back(base + s);
        row += n;
    }
    return out;
}

LabeledDataset select_rows(const LabeledDataset& ds, std::span<const std::size_t> rows) {
    LabeledDataset out;
    const auto m = static_cast<Eigen::Index>(rows.size());
    out.features.resize(m, ds.features.cols());
    out.labels.resize(m, ds.labels.cols());
    out.sources = ds.sources;
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto k = rows[static_cast<std::size_t>(r)];
        if (k >= ds.rows()) throw DimensionError("select_rows: row index out of range");
        out.features.row(r) = ds.features.row(static_cast<Eigen::Index>(k));
        out.labels.row(r) = ds.labels.row(static_cast<Eigen::Index>(k));
        out.time_tags.push_back(ds.time_tags[k]);
        out.row_source.push_back(ds.row_source[k]);
    }
    return out;
}

void SplitSpec::validate() const {
    for (const double f : {train_fraction, validation_fraction, test_fraction}) {
        if (!(f > 0.0 && f < 1.0)) throw ConfigError("split fractions must each lie in (0, 1)");
    }
    if (std::abs(train_fraction + validation_fraction + test_fraction - 1.0) > 1e-12) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitResult split(const LabeledDataset& ds, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = ds.rows();
    if (n < 10) throw EmptyDatasetError("split needs at least 10 rows");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(spec.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.validation_fraction));
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test_fraction));
    const std::size_t n_train = n - n_val - n_test;
    const std::span<const std::size_t> all(order);
    return {select_rows(ds, all.subspan(0, n_train)), select_rows(ds, all.subspan(n_train, n_val)),
            select_rows(ds, all.subspan(n_train + n_val, n_test))};
}

Matrix label_targets(const LabeledDataset& ds) { return ds.labels.cast<double>(); }

namespace {

void check_token(const std::string& s) {
    if (s.find_first_of(" \t\r\n=") != std::string::npos) {
        throw ConfigError("provenance ids may not contain whitespace or '=': '" + s + "'");
    }
}

std::map<std::string, std::string> key_values(std::istringstream& ss) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("dataset header: expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("dataset header: missing '" + key + "'");
    return it->second;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const LabeledDataset& ds) {
    ds.validate();
    const auto n_pmu = ds.pmu_count();
    const Provenance first = ds.sources.empty() ? Provenance{} : ds.sources.front();
    for (const auto& s : ds.sources) check_token(s.scenario_id);
    out << "# pmuguard-dataset version=1 n_pmu=" << n_pmu << " rows=" << ds.rows()
        << " seed=" << first.seed << " scenario=" << (ds.sources.size() > 1 ? "mixed" : first.scenario_id)
        << "\n";
    for (std::size_t i = 0; i < ds.sources.size(); ++i) {
        out << "# source index=" << i << " seed=" << ds.sources[i].seed
            << " scenario=" << ds.sources[i].scenario_id << "\n";
    }
    out << "# runs";
    for (std::size_t k = 0; k < ds.rows();) {
        std::size_t len = 1;
        while (k + len < ds.rows() && ds.row_source[k + len] == ds.row_source[k]) ++len;
        out << ' ' << ds.row_source[k] << ':' << len;
        k += len;
    }
    out << "\nt";
    for (std::size_t j = 0; j < n_pmu; ++j) out << ",x" << j + 1;
    for (std::size_t j = 0; j < n_pmu; ++j) out << ",y" << j + 1;
    out << "\n";
    for (std::size_t k = 0; k < ds.rows(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        out << text::format_sig9(ds.time_tags[k]);
        for (Eigen::Index j = 0; j < ds.features.cols(); ++j) out << ',' << text::format_sig9(ds.features(r, j));
        for (Eigen::Index j = 0; j < ds.labels.cols(); ++j) out << ',' << static_cast<int>(ds.labels(r, j));
        out << "\n";
    }
}

LabeledDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# pmuguard-dataset ", 0) != 0) {
        throw ParseError("dataset file lacks the '# pmuguard-dataset' header");
    }
    std::istringstream hs(line.substr(19));
    const auto header = key_values(hs);
    if (need(header, "version") != "1") throw ParseError("unsupported dataset version " + need(header, "version"));
    const auto n_pmu = static_cast<std::size_t>(text::parse_integer(need(header, "n_pmu")));
    const auto n_rows = static_cast<std::size_t>(text::parse_integer(need(header, "rows")));
    if (n_pmu == 0) throw ParseError("dataset header: n_pmu must be positive");

    LabeledDataset ds;
    while (std::getline(in, line) && line.rfind("# source ", 0) == 0) {
        std::istringstream ss(line.substr(9));
        const auto kv = key_values(ss);
        if (static_cast<std::size_t>(text::parse_integer(need(kv, "index"))) != ds.sources.size()) {
            throw ParseError("dataset sources must be listed in index order");
        }
        ds.sources.push_back({need(kv, "scenario"), std::stoull(need(kv, "seed"))});
    }
    if (line.rfind("# runs", 0) != 0) throw ParseError("dataset file lacks the '# runs' line");
    {
        std::istringstream ss(line.substr(6));
        std::string tok;
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) throw ParseError("malformed run '" + tok + "'");
            const auto src = static_cast<std::size_t>(text::parse_integer(std::string_view(tok).substr(0, colon)));
            const auto len = static_cast<std::size_t>(text::parse_integer(std::string_view(tok).substr(colon + 1)));
            if (src >= ds.sources.size()) throw ParseError("run refers to unknown source");
            ds.row_source.insert(ds.row_source.end(), len, src);
        }
    }
    if (!std::getline(in, line)) throw ParseError("dataset file lacks the column header");
    std::string expected = "t";
    for (std::size_t j = 0; j < n_pmu; ++j) expected += ",x" + std::to_string(j + 1);
    for (std::size_t j = 0; j < n_pmu; ++j) expected += ",y" + std::to_string(j + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) throw ParseError("dataset column header mismatch");

    const auto m = static_cast<Eigen::Index>(n_rows);
    const auto w = static_cast<Eigen::Index>(n_pmu);
    ds.features.resize(m, w);
    ds.labels.resize(m, w);
    ds.time_tags.reserve(n_rows);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (k >= n_rows) throw ParseError("dataset has more rows than its header declares");
        const auto fields = text::split(line, ',');
        if (fields.size() != 1 + 2 * n_pmu) {
            throw ParseError("dataset row " + std::to_string(k + 1) + ": wrong field count");
        }
        const auto r = static_cast<Eigen::Index>(k);
        ds.time_tags.push_back(text::parse_number(fields[0]));
        for (Eigen::Index j = 0; j < w; ++j) ds.features(r, j) = text::parse_number(fields[1 + j]);
        for (Eigen::Index j = 0; j < w; ++j) {
            const auto y = text::parse_integer(fields[1 + n_pmu + j]);
            if (y != 0 && y != 1) throw ParseError("dataset labels must be 0 or 1");
            ds.labels(r, j) = static_cast<std::uint8_t>(y);
        }
        ++k;
    }
    if (k != n_rows) throw ParseError("dataset truncated: expected " + std::to_string(n_rows) + " rows, got " + std::to_string(k));
    if (ds.row_source.size() != n_rows) throw ParseError("dataset runs do not cover every row");
    ds.validate();
    return ds;
}

}  // namespace pmuguard::data
