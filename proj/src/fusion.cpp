#include "polyenc/fusion.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "binary_io.hpp"
#include "polyenc/io.hpp"

namespace polyenc {

using binio::get_le;
using binio::put_le;

FeatureVectors extract_features(const ComplexSpectrum& spec) {
    FeatureVectors f;
    f.z.reserve(spec.values.size());
    f.phi.reserve(spec.values.size());
    for (const Complex& c : spec.values) {
        f.z.push_back(std::hypot(c.real(), c.imag()));
        f.phi.push_back(c == Complex(0.0, 0.0) ? 0.0 : std::atan2(c.imag(), c.real()));
    }
    return f;
}

// SplitMix64.
std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

Matrix uniform_matrix(int rows, int cols, double bound, Rng& rng) {
    Matrix m(rows, cols);
    // Row-major draw order so the stream does not depend on storage order.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
    }
    return m;
}

Linear make_linear(int in, int out, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Linear l;
    l.w = uniform_matrix(out, in, bound, rng);
    l.b = uniform_matrix(out, 1, bound, rng);
    return l;
}

void check_rows(const Matrix& x, int expected, const char* what) {
    if (x.rows() != expected) {
        throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(expected) + " rows, got " +
                            std::to_string(x.rows()));
    }
}

}  // namespace

Mlp2 make_mlp2(int in, int hidden, int out, Rng& rng) {
    if (in <= 0 || hidden <= 0 || out <= 0) throw ShapeMismatch("layer sizes must be positive");
    Mlp2 m;
    m.l1 = make_linear(in, hidden, rng);
    m.l2 = make_linear(hidden, out, rng);
    return m;
}

Mlp2 zeros_like(const Mlp2& m) {
    Mlp2 z;
    z.l1.w = Matrix::Zero(m.l1.w.rows(), m.l1.w.cols());
    z.l1.b = Matrix::Zero(m.l1.b.rows(), 1);
    z.l2.w = Matrix::Zero(m.l2.w.rows(), m.l2.w.cols());
    z.l2.b = Matrix::Zero(m.l2.b.rows(), 1);
    return z;
}

Matrix forward(const Mlp2& m, const Matrix& x, Mlp2Tape* tape) {
    check_rows(x, m.in_dim(), "mlp input");
    Matrix h = m.l1.w * x;
    h.colwise() += m.l1.b.col(0);
    h = h.cwiseMax(0.0);
    Matrix y = m.l2.w * h;
    y.colwise() += m.l2.b.col(0);
    if (tape) {
        tape->x = x;
        tape->h = std::move(h);
    }
    return y;
}

Matrix backward(const Mlp2& m, const Mlp2Tape& tape, const Matrix& dy, Mlp2& grad) {
    check_rows(dy, m.out_dim(), "mlp output gradient");
    grad.l2.w.noalias() += dy * tape.h.transpose();
    grad.l2.b += dy.rowwise().sum();
    Matrix dh = m.l2.w.transpose() * dy;
    dh = (tape.h.array() > 0.0).select(dh, 0.0);
    grad.l1.w.noalias() += dh * tape.x.transpose();
    grad.l1.b += dh.rowwise().sum();
    return m.l1.w.transpose() * dh;
}

void append_tensors(Mlp2& m, std::vector<Matrix*>& out) {
    out.push_back(&m.l1.w);
    out.push_back(&m.l1.b);
    out.push_back(&m.l2.w);
    out.push_back(&m.l2.b);
}

std::string variant_name(FusionVariant v) {
    switch (v) {
        case FusionVariant::Learned: return "learned";
        case FusionVariant::MagOnly: return "mag";
        case FusionVariant::PhaseOnly: return "phase";
        case FusionVariant::Concat: return "concat";
    }
    return "learned";
}

FusionVariant parse_variant(const std::string& name) {
    for (FusionVariant v : {FusionVariant::Learned, FusionVariant::MagOnly, FusionVariant::PhaseOnly,
                            FusionVariant::Concat}) {
        if (variant_name(v) == name) return v;
    }
    throw Error("unknown fusion variant '" + name + "' (learned, mag, phase, concat)");
}

FusionParams init_fusion(const FusionShape& s, Rng& rng) {
    FusionParams p;
    p.h_z = make_mlp2(s.features, s.branch_hidden, s.features, rng);
    p.h_phi = make_mlp2(s.features, s.branch_hidden, s.features, rng);
    p.h_final = make_mlp2(2 * s.features, s.final_hidden, s.d, rng);
    return p;
}

FusionParams zeros_like(const FusionParams& p) { return {zeros_like(p.h_z), zeros_like(p.h_phi), zeros_like(p.h_final)}; }

std::vector<Matrix*> trainable_tensors(FusionParams& p, FusionVariant variant) {
    std::vector<Matrix*> out;
    if (variant == FusionVariant::Learned || variant == FusionVariant::MagOnly) append_tensors(p.h_z, out);
    if (variant == FusionVariant::Learned || variant == FusionVariant::PhaseOnly) append_tensors(p.h_phi, out);
    append_tensors(p.h_final, out);
    return out;
}

std::vector<Matrix*> all_tensors(FusionParams& p) {
    std::vector<Matrix*> out;
    append_tensors(p.h_z, out);
    append_tensors(p.h_phi, out);
    append_tensors(p.h_final, out);
    return out;
}

Matrix fuse_batch(const FusionParams& p, FusionVariant variant, const Matrix& z, const Matrix& phi, FusionTape* tape) {
    const int n = p.h_z.in_dim();
    check_rows(z, n, "magnitude features");
    check_rows(phi, n, "phase features");
    if (z.cols() != phi.cols()) throw ShapeMismatch("magnitude and phase batches differ in size");
    if (p.h_final.in_dim() != 2 * n) throw ShapeMismatch("final MLP input must be twice the feature count");

    Matrix cat(2 * n, z.cols());
    switch (variant) {
        case FusionVariant::Learned:
            cat.topRows(n) = forward(p.h_z, z, tape ? &tape->z : nullptr);
            cat.bottomRows(n) = forward(p.h_phi, phi, tape ? &tape->phi : nullptr);
            break;
        case FusionVariant::MagOnly:
            cat.topRows(n) = forward(p.h_z, z, tape ? &tape->z : nullptr);
            cat.bottomRows(n).setZero();
            break;
        case FusionVariant::PhaseOnly:
            cat.topRows(n).setZero();
            cat.bottomRows(n) = forward(p.h_phi, phi, tape ? &tape->phi : nullptr);
            break;
        case FusionVariant::Concat:
            cat.topRows(n) = z;
            cat.bottomRows(n) = phi;
            break;
    }
    return forward(p.h_final, cat, tape ? &tape->fin : nullptr);
}

void fuse_backward(const FusionParams& p, FusionVariant variant, const FusionTape& tape, const Matrix& dv,
                   FusionParams& grad) {
    const int n = p.h_z.in_dim();
    const Matrix dcat = backward(p.h_final, tape.fin, dv, grad.h_final);
    if (variant == FusionVariant::Learned || variant == FusionVariant::MagOnly) {
        backward(p.h_z, tape.z, dcat.topRows(n), grad.h_z);
    }
    if (variant == FusionVariant::Learned || variant == FusionVariant::PhaseOnly) {
        backward(p.h_phi, tape.phi, dcat.bottomRows(n), grad.h_phi);
    }
}

std::vector<double> fuse(const FeatureVectors& f, const FusionParams& p, FusionVariant variant) {
    if (f.z.size() != f.phi.size()) throw ShapeMismatch("magnitude and phase lengths differ");
    const auto n = static_cast<Eigen::Index>(f.z.size());
    const Matrix z = Eigen::Map<const Eigen::VectorXd>(f.z.data(), n);
    const Matrix phi = Eigen::Map<const Eigen::VectorXd>(f.phi.data(), n);
    const Matrix v = fuse_batch(p, variant, z, phi);
    return {v.data(), v.data() + v.size()};
}

void adamw_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads, AdamWState& state,
                const AdamWOptions& opt) {
    if (params.size() != grads.size()) throw ShapeMismatch("parameter and gradient lists differ in length");
    if (state.m.empty()) {
        for (const Matrix* p : params) {
            state.m.push_back(Matrix::Zero(p->rows(), p->cols()));
            state.v.push_back(Matrix::Zero(p->rows(), p->cols()));
        }
    }
    if (state.m.size() != params.size()) throw ShapeMismatch("optimizer state does not match parameters");
    ++state.step;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state.step));
    const double step_size = opt.lr / bc1;
    const double bc2_sqrt = std::sqrt(bc2);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = *grads[i];
        if (g.rows() != p.rows() || g.cols() != p.cols()) throw ShapeMismatch("gradient shape differs from parameter");
        p *= 1.0 - opt.lr * opt.weight_decay;
        state.m[i] = opt.beta1 * state.m[i] + (1.0 - opt.beta1) * g;
        state.v[i] = opt.beta2 * state.v[i] + (1.0 - opt.beta2) * g.cwiseProduct(g);
        const auto denom = (state.v[i].array().sqrt() / bc2_sqrt) + opt.eps;
        p.array() -= step_size * state.m[i].array() / denom;
    }
}

namespace {

// Sanity bound on entries declared by a file header before allocating.
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 30;

}  // namespace

void write_checkpoint(std::ostream& out, const std::string& config_json, const std::vector<const Matrix*>& tensors) {
    out.write("P2VM", 4);
    put_le<std::uint32_t>(out, 1);
    put_le<std::uint64_t>(out, fnv1a(config_json.data(), config_json.size()));
    put_le<std::uint64_t>(out, config_json.size());
    out.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
    for (const Matrix* t : tensors) {
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t->rows()));
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t->cols()));
        for (Eigen::Index i = 0; i < t->size(); ++i) put_le<double>(out, t->data()[i]);
    }
}

Checkpoint read_checkpoint(std::istream& in) {
    binio::expect_magic(in, "P2VM");
    const auto version = get_le<std::uint32_t>(in);
    if (version != 1) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    Checkpoint ck;
    ck.config_hash = get_le<std::uint64_t>(in);
    const auto len = get_le<std::uint64_t>(in);
    if (len > (1u << 24)) throw CheckpointError("checkpoint config block too large");
    ck.config_json.resize(len);
    if (!in.read(ck.config_json.data(), static_cast<std::streamsize>(len))) throw CheckpointError("truncated checkpoint");
    if (fnv1a(ck.config_json.data(), len) != ck.config_hash) throw CheckpointError("checkpoint config hash mismatch");
    const auto count = get_le<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < count; ++k) {
        const auto rows = get_le<std::uint32_t>(in);
        const auto cols = get_le<std::uint32_t>(in);
        if (std::uint64_t{rows} * cols > kMaxEntries) throw CheckpointError("checkpoint tensor too large");
        Matrix t(rows, cols);
        for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = get_le<double>(in);
        ck.tensors.push_back(std::move(t));
    }
    return ck;
}

void load_tensors(const std::vector<Matrix>& src, const std::vector<Matrix*>& dst) {
    if (src.size() != dst.size()) {
        throw ShapeMismatch("checkpoint holds " + std::to_string(src.size()) + " tensors, model needs " +
                            std::to_string(dst.size()));
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i].rows() != dst[i]->rows() || src[i].cols() != dst[i]->cols()) {
            throw ShapeMismatch("checkpoint tensor " + std::to_string(i) + " has the wrong shape");
        }
        *dst[i] = src[i];
    }
}

void write_embeddings_binary(std::ostream& out, const Matrix& rows, std::uint64_t config_hash) {
    out.write("P2VE", 4);
    put_le<std::uint32_t>(out, 1);
    put_le<std::uint64_t>(out, config_hash);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(rows.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(rows.cols()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) put_le<double>(out, rows(i, j));
    }
}

Embeddings read_embeddings_binary(std::istream& in) {
    binio::expect_magic(in, "P2VE");
    const auto version = get_le<std::uint32_t>(in);
    if (version != 1) throw ParseError("unsupported embedding file version " + std::to_string(version));
    Embeddings e;
    e.config_hash = get_le<std::uint64_t>(in);
    const auto r = get_le<std::uint64_t>(in);
    const auto c = get_le<std::uint64_t>(in);
    if (c != 0 && r > kMaxEntries / c) throw ParseError("embedding file too large");
    e.rows.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < e.rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.rows.cols(); ++j) e.rows(i, j) = get_le<double>(in);
    }
    return e;
}

std::string embeddings_to_csv(const Matrix& rows) {
    std::string out;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j) out += ',';
            out += format_double(rows(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace polyenc
