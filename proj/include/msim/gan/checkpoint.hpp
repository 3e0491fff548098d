#pragma once

#include <string>

#include "msim/gan/train.hpp"

namespace msim::gan {

struct Checkpoint {
    ModelHyper hyper;
    GeneratorParams gen;
    CriticParams critic;
    std::string scaler_ref; // path of the scaler file, relative to the checkpoint
    GpMode gp_mode = GpMode::GeneratedPoint;
    std::uint64_t seed = 0;
};

void save_checkpoint(const std::string& path, const ModelHyper& hyper,
                     const GeneratorParams& gen, const CriticParams& critic,
                     const TrainConfig& cfg);

// Validates every tensor dimension against the stored hyperparameters.
Checkpoint load_checkpoint(const std::string& path);

} // namespace msim::gan
