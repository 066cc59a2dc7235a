#pragma once

// The `pmuguard train` flow on the shipped defaults, in-process.

#include <cstdint>

#include "pmuguard/dataset.hpp"
#include "pmuguard/experiment.hpp"
#include "pmuguard/mlp.hpp"

namespace pipeline {

using namespace pmuguard;

struct Trained {
    data::LabeledDataset dataset;
    data::SplitResult parts;
    mlp::TrainResult result;
    double alpha = 0.5;
};

inline Trained train_default(std::uint64_t seed) {
    Trained t;
    t.dataset = eval::generate_dataset(grid::default_swing_parameters(), eval::DatasetRecipe{});
    mlp::TrainConfig cfg;
    cfg.seed = seed;
    data::SplitSpec split;
    split.shuffle_seed = seed;
    t.parts = data::split(t.dataset, split);
    t.result = mlp::train(mlp::default_layer_sizes(), t.parts.train, t.parts.validation, cfg, &t.parts.test);
    t.alpha = eval::tune_alpha(t.result.network, t.parts.validation);
    return t;
}

}  // namespace pipeline
