#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyenc/frequency_grid.hpp"
#include "polyenc/fusion.hpp"
#include "polyenc/tasks.hpp"

namespace polyenc {

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataMismatch : public Error {
public:
    using Error::Error;
};

class DivergedTraining : public Error {
public:
    using Error::Error;
};

class CheckpointMismatch : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    // frequency grid
    double f_min = 0.1;
    double f_max = 1.0;
    int w_axis = 10;
    // model
    int d = 32;
    int branch_hidden = 0;  ///< 0 means the grid size
    int final_hidden = 64;
    int head_hidden = 64;
    FusionVariant variant = FusionVariant::Learned;
    // data
    Task task = Task::Topo;
    PairType pair_type = PairType::PointPolygon;
    int per_class = 500;
    std::uint64_t seed = 0;
    // optimization
    double lr = 1e-4;
    double weight_decay = 1e-8;
    int batch = 128;
    int epochs = 20;
    int runs = 5;
    // paths; not part of the config hash
    std::string dataset;
    std::string checkpoint;
    std::string report;
    std::string output;
};

/// Canonical JSON (sorted keys). Paths are left out unless asked for.
std::string config_json(const RunConfig& c, bool include_paths = false);
std::uint64_t config_hash(const RunConfig& c);
/// Applies the keys present in `text` over `base`; unknown keys are a ConfigError.
RunConfig config_from_json(const std::string& text, RunConfig base = {});
/// Range checks; throws ConfigError.
void check_config(const RunConfig& c);

FrequencyGrid grid_for(const RunConfig& c);
FusionShape shape_for(const RunConfig& c);
GenConfig gen_config_for(const RunConfig& c);

/// Fusion parameters plus the task head (absent for distance).
struct Model {
    FusionParams fusion;
    Mlp2 head;
    bool has_head = false;
};

Model init_model(const RunConfig& c, std::uint64_t seed);
std::vector<Matrix*> model_tensors(Model& m);
std::vector<Matrix*> trainable_tensors(Model& m, FusionVariant variant);

/// Magnitude and phase feature columns for every geometry of a pair set.
struct EncodedPairs {
    Matrix za, pa, zb, pb;  ///< features x pairs
    std::vector<int> labels;
    std::vector<double> distances;
    std::vector<Split> splits;
};

EncodedPairs encode_pairs(const LabeledPairSet& set, const FrequencyGrid& grid, Task task);

/// Features of many geometries as columns.
void encode_features(const std::vector<Geometry>& gs, const FrequencyGrid& grid, Matrix& z, Matrix& phi);

struct SplitMetrics {
    ClassificationMetrics cls;
    double mae = 0.0;
    double loss = 0.0;
    std::size_t count = 0;
};

struct EpochReport {
    int epoch = 0;
    double train_loss = 0.0;
    SplitMetrics val;
};

struct TrainResult {
    Model model;
    std::vector<EpochReport> epochs;
    SplitMetrics test;
    double seconds = 0.0;
};

/// Joint training of fusion and head with AdamW on the train split,
/// validation after every epoch, test metrics at the end. Throws
/// DivergedTraining on a non-finite loss.
TrainResult train_model(const RunConfig& c, const EncodedPairs& data, std::uint64_t seed);

SplitMetrics evaluate(const Model& m, const RunConfig& c, const EncodedPairs& data, Split split);

/// Headline number of a split: accuracy, or MAE for distance.
double headline(const SplitMetrics& m, Task task);

}  // namespace polyenc
