#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyenc/geometry.hpp"
#include "polyenc/spectral.hpp"

namespace polyenc {

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

using Matrix = Eigen::MatrixXd;

/// Magnitude and phase of a spectrum, index-aligned with its grid.
struct FeatureVectors {
    std::vector<double> z;    ///< |F|, nonnegative
    std::vector<double> phi;  ///< atan2(Im F, Re F) in (-pi, pi]; 0 where F == 0
};

FeatureVectors extract_features(const ComplexSpectrum& spec);

/// Deterministic generator for parameter initialization and shuffling.
/// Bit-exact across platforms: unlike the std distributions, every draw is
/// defined here in terms of the raw 64-bit engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
};

/// Affine layer y = W x + b applied column-wise (columns are samples).
struct Linear {
    Matrix w;  ///< out x in
    Matrix b;  ///< out x 1
};

/// Linear -> ReLU -> Linear.
struct Mlp2 {
    Linear l1;
    Linear l2;

    int in_dim() const { return static_cast<int>(l1.w.cols()); }
    int hidden_dim() const { return static_cast<int>(l1.w.rows()); }
    int out_dim() const { return static_cast<int>(l2.w.rows()); }
};

/// Activations kept by a forward pass for the matching backward pass.
struct Mlp2Tape {
    Matrix x;
    Matrix h;  ///< ReLU output of the first layer
};

/// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Mlp2 make_mlp2(int in, int hidden, int out, Rng& rng);
Mlp2 zeros_like(const Mlp2& m);

Matrix forward(const Mlp2& m, const Matrix& x, Mlp2Tape* tape = nullptr);

/// Accumulates parameter gradients into `grad` and returns dL/dx.
/// The ReLU derivative at 0 is taken as 0.
Matrix backward(const Mlp2& m, const Mlp2Tape& tape, const Matrix& dy, Mlp2& grad);

void append_tensors(Mlp2& m, std::vector<Matrix*>& out);

enum class FusionVariant {
    Learned,    ///< h_z, h_phi and h_final all trained
    MagOnly,    ///< phase branch output forced to zero
    PhaseOnly,  ///< magnitude branch output forced to zero
    Concat,     ///< h_z, h_phi frozen at identity; raw [z; phi] feeds h_final
};

std::string variant_name(FusionVariant v);
FusionVariant parse_variant(const std::string& name);

struct FusionShape {
    int features = 210;      ///< grid size
    int branch_hidden = 210;
    int final_hidden = 64;
    int d = 32;
};

struct FusionParams {
    Mlp2 h_z;
    Mlp2 h_phi;
    Mlp2 h_final;  ///< 2 * features -> final_hidden -> d
};

FusionParams init_fusion(const FusionShape& shape, Rng& rng);
FusionParams zeros_like(const FusionParams& p);

/// Tensors that receive updates for the given variant, in a fixed order.
std::vector<Matrix*> trainable_tensors(FusionParams& p, FusionVariant variant);
/// Every tensor, in checkpoint order.
std::vector<Matrix*> all_tensors(FusionParams& p);

struct FusionTape {
    Mlp2Tape z;
    Mlp2Tape phi;
    Mlp2Tape fin;
};

/// Batched fusion. `z` and `phi` are features x batch; returns d x batch.
Matrix fuse_batch(const FusionParams& p, FusionVariant variant, const Matrix& z, const Matrix& phi,
                  FusionTape* tape = nullptr);

/// Reverse pass for fuse_batch; `dv` is d x batch.
void fuse_backward(const FusionParams& p, FusionVariant variant, const FusionTape& tape, const Matrix& dv,
                   FusionParams& grad);

std::vector<double> fuse(const FeatureVectors& f, const FusionParams& p,
                         FusionVariant variant = FusionVariant::Learned);

struct AdamWOptions {
    double lr = 1e-4;
    double weight_decay = 1e-8;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First and second moment estimates; zero-initialized on first use.
struct AdamWState {
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    long step = 0;
};

/// p <- p - lr * wd * p, then p <- p - lr * m_hat / (sqrt(v_hat) + eps).
void adamw_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads, AdamWState& state,
                const AdamWOptions& opt);

/// Binary checkpoint: "P2VM", u32 version, u64 hash of the config text,
/// u64 config length, config bytes, u32 tensor count, then per tensor u32
/// rows, u32 cols and column-major f64 values. Little-endian.
struct Checkpoint {
    std::string config_json;
    std::uint64_t config_hash = 0;
    std::vector<Matrix> tensors;
};

void write_checkpoint(std::ostream& out, const std::string& config_json, const std::vector<const Matrix*>& tensors);
Checkpoint read_checkpoint(std::istream& in);

/// Copies checkpoint tensors into `dst` in order; throws ShapeMismatch.
void load_tensors(const std::vector<Matrix>& src, const std::vector<Matrix*>& dst);

/// "P2VE", u32 version, u64 hash of the producing config, u64 rows,
/// u64 cols, row-major f64. Little-endian.
struct Embeddings {
    std::uint64_t config_hash = 0;
    Matrix rows;
};

void write_embeddings_binary(std::ostream& out, const Matrix& rows, std::uint64_t config_hash);
Embeddings read_embeddings_binary(std::istream& in);
/// One comma-separated row per embedding, shortest round-trip decimals.
std::string embeddings_to_csv(const Matrix& rows);

}  // namespace polyenc
