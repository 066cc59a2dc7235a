#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmuguard/attack.hpp"
#include "pmuguard/grid_sim.hpp"

namespace pmuguard::data {

using grid::Matrix;

struct Provenance {
    std::string scenario_id;
    std::uint64_t seed = 0;

    bool operator==(const Provenance&) const = default;
};

// The training matrix M = [x | y]: rotor angles and per-PMU attack labels,
// with the time tags kept in their own column.
struct LabeledDataset {
    std::vector<double> time_tags;
    Matrix features;     // n x N_g [rad]
    LabelMatrix labels;  // n x N_g, entries 0/1
    std::vector<Provenance> sources;
    std::vector<std::size_t> row_source;  // index into sources, one per row

    std::size_t rows() const { return time_tags.size(); }
    std::size_t pmu_count() const { return static_cast<std::size_t>(features.cols()); }

    void validate() const;
    bool operator==(const LabeledDataset& other) const;
};

// Wraps into (-pi, pi].
double wrap_angle(double theta);

struct Preprocessed {
    LabeledDataset dataset;
    std::size_t dropped_rows = 0;
};

// Separates time tags from angles, drops rows with a non-finite channel,
// wraps angles and rounds them to the 9-significant-digit grid used on disk.
// Throws EmptyDatasetError if nothing survives.
Preprocessed preprocess(const grid::Trajectory& traj, const LabelMatrix& labels,
                        const Provenance& provenance = {});

LabeledDataset concat(std::span<const LabeledDataset> parts);

LabeledDataset select_rows(const LabeledDataset& ds, std::span<const std::size_t> rows);

struct SplitSpec {
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t shuffle_seed = 0;

    void validate() const;
};

struct SplitResult {
    LabeledDataset train;
    LabeledDataset validation;
    LabeledDataset test;
};

// Seeded shuffle, then validation and test take round(n * fraction) rows and
// train takes the remainder.
SplitResult split(const LabeledDataset& ds, const SplitSpec& spec);

// Targets as doubles for the network.
Matrix label_targets(const LabeledDataset& ds);

// CSV t,x1..xN,y1..yN preceded by '#' metadata lines.
void write_dataset_csv(std::ostream& out, const LabeledDataset& ds);
LabeledDataset read_dataset_csv(std::istream& in);

}  // namespace pmuguard::data
