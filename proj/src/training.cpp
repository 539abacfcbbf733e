#include "polyenc/training.hpp"

#include <chrono>
#include <cmath>

#include "json.hpp"
#include "polyenc/spectral.hpp"

namespace polyenc {

using json = nlohmann::json;

namespace {

json config_object(const RunConfig& c, bool include_paths) {
    json j{{"f_min", c.f_min},
           {"f_max", c.f_max},
           {"w_axis", c.w_axis},
           {"d", c.d},
           {"branch_hidden", c.branch_hidden},
           {"final_hidden", c.final_hidden},
           {"head_hidden", c.head_hidden},
           {"variant", variant_name(c.variant)},
           {"task", task_name(c.task)},
           {"pair_type", pair_type_name(c.pair_type)},
           {"per_class", c.per_class},
           {"seed", c.seed},
           {"lr", c.lr},
           {"weight_decay", c.weight_decay},
           {"batch", c.batch},
           {"epochs", c.epochs},
           {"runs", c.runs}};
    if (include_paths) {
        j["dataset"] = c.dataset;
        j["checkpoint"] = c.checkpoint;
        j["report"] = c.report;
        j["output"] = c.output;
    }
    return j;
}

template <class T>
void take(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

std::string config_json(const RunConfig& c, bool include_paths) { return config_object(c, include_paths).dump(); }

std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = config_json(c, false);
    return fnv1a(s.data(), s.size());
}

RunConfig config_from_json(const std::string& text, RunConfig c) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const json known = config_object(RunConfig{}, true);
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
    }
    try {
        take(j, "f_min", c.f_min);
        take(j, "f_max", c.f_max);
        take(j, "w_axis", c.w_axis);
        take(j, "d", c.d);
        take(j, "branch_hidden", c.branch_hidden);
        take(j, "final_hidden", c.final_hidden);
        take(j, "head_hidden", c.head_hidden);
        if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
        if (j.contains("task")) c.task = parse_task(j["task"].get<std::string>());
        if (j.contains("pair_type")) c.pair_type = parse_pair_type(j["pair_type"].get<std::string>());
        take(j, "per_class", c.per_class);
        take(j, "seed", c.seed);
        take(j, "lr", c.lr);
        take(j, "weight_decay", c.weight_decay);
        take(j, "batch", c.batch);
        take(j, "epochs", c.epochs);
        take(j, "runs", c.runs);
        take(j, "dataset", c.dataset);
        take(j, "checkpoint", c.checkpoint);
        take(j, "report", c.report);
        take(j, "output", c.output);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return c;
}

void check_config(const RunConfig& c) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(c.f_min > 0.0 && c.f_max > c.f_min, "need 0 < f_min < f_max");
    require(c.w_axis >= 2, "w_axis must be at least 2");
    require(c.d > 0 && c.final_hidden > 0 && c.head_hidden > 0 && c.branch_hidden >= 0, "layer sizes must be positive");
    require(c.per_class > 0, "per_class must be positive");
    require(c.lr > 0.0 && c.weight_decay >= 0.0, "need lr > 0 and weight_decay >= 0");
    require(c.batch > 0, "batch must be positive");
    require(c.epochs >= 0, "epochs must be nonnegative");
    require(c.runs > 0, "runs must be positive");
    require(c.task == Task::Distance || class_count(c.task, c.pair_type) > 0,
            "task " + task_name(c.task) + " has no classes for " + pair_type_name(c.pair_type) + " pairs");
}

FrequencyGrid grid_for(const RunConfig& c) { return build_grid(geometric_frequencies(c.f_min, c.f_max, c.w_axis)); }

FusionShape shape_for(const RunConfig& c) {
    const int features = c.w_axis * (2 * c.w_axis + 1);
    return {features, c.branch_hidden > 0 ? c.branch_hidden : features, c.final_hidden, c.d};
}

GenConfig gen_config_for(const RunConfig& c) {
    GenConfig g;
    g.task = c.task;
    g.pair_type = c.pair_type;
    g.per_class = c.per_class;
    g.seed = c.seed;
    return g;
}

Model init_model(const RunConfig& c, std::uint64_t seed) {
    Rng rng(seed);
    Model m;
    m.fusion = init_fusion(shape_for(c), rng);
    if (c.task != Task::Distance) {
        m.head = make_mlp2(2 * c.d, c.head_hidden, class_count(c.task, c.pair_type), rng);
        m.has_head = true;
    }
    return m;
}

std::vector<Matrix*> model_tensors(Model& m) {
    std::vector<Matrix*> out = all_tensors(m.fusion);
    if (m.has_head) append_tensors(m.head, out);
    return out;
}

std::vector<Matrix*> trainable_tensors(Model& m, FusionVariant variant) {
    std::vector<Matrix*> out = trainable_tensors(m.fusion, variant);
    if (m.has_head) append_tensors(m.head, out);
    return out;
}

void encode_features(const std::vector<Geometry>& gs, const FrequencyGrid& grid, Matrix& z, Matrix& phi) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    z.resize(n, static_cast<Eigen::Index>(gs.size()));
    phi.resize(n, static_cast<Eigen::Index>(gs.size()));
    for (std::size_t j = 0; j < gs.size(); ++j) {
        const FeatureVectors f = extract_features(encode_spectrum(gs[j], grid));
        const auto col = static_cast<Eigen::Index>(j);
        z.col(col) = Eigen::Map<const Eigen::VectorXd>(f.z.data(), n);
        phi.col(col) = Eigen::Map<const Eigen::VectorXd>(f.phi.data(), n);
    }
}

EncodedPairs encode_pairs(const LabeledPairSet& set, const FrequencyGrid& grid, Task task) {
    EncodedPairs e;
    std::vector<Geometry> as, bs;
    for (const PairSample& s : set.pairs) {
        as.push_back(s.a);
        bs.push_back(s.b);
        e.splits.push_back(s.split);
        switch (task) {
            case Task::Topo:
                if (!s.topo) throw DataMismatch("dataset has no topological labels");
                e.labels.push_back(*s.topo);
                break;
            case Task::Direction:
                if (!s.dir) throw DataMismatch("dataset has no direction labels");
                e.labels.push_back(*s.dir);
                break;
            case Task::Distance:
                if (!s.dist) throw DataMismatch("dataset has no distance labels");
                e.distances.push_back(*s.dist);
                break;
        }
    }
    encode_features(as, grid, e.za, e.pa);
    encode_features(bs, grid, e.zb, e.pb);
    return e;
}

namespace {

struct Batch {
    Matrix z, phi;  ///< a columns then b columns
    std::vector<int> labels;
    std::vector<double> distances;
};

Batch gather(const EncodedPairs& data, const std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi) {
    const auto b = static_cast<Eigen::Index>(hi - lo);
    Batch out;
    out.z.resize(data.za.rows(), 2 * b);
    out.phi.resize(data.pa.rows(), 2 * b);
    for (std::size_t k = lo; k < hi; ++k) {
        const auto j = static_cast<Eigen::Index>(idx[k]);
        const auto c = static_cast<Eigen::Index>(k - lo);
        out.z.col(c) = data.za.col(j);
        out.z.col(b + c) = data.zb.col(j);
        out.phi.col(c) = data.pa.col(j);
        out.phi.col(b + c) = data.pb.col(j);
        if (!data.labels.empty()) out.labels.push_back(data.labels[idx[k]]);
        if (!data.distances.empty()) out.distances.push_back(data.distances[idx[k]]);
    }
    return out;
}

std::vector<std::size_t> indices_of(const EncodedPairs& data, Split split) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < data.splits.size(); ++i) {
        if (data.splits[i] == split) out.push_back(i);
    }
    return out;
}

int argmax(const Matrix& logits, Eigen::Index col) {
    Eigen::Index best;
    logits.col(col).maxCoeff(&best);
    return static_cast<int>(best);
}

// Loss on one batch; with `grad` set, also accumulates gradients.
double batch_step(const Model& m, FusionVariant variant, const Batch& batch, Model* grad, std::vector<int>* preds,
                  std::vector<double>* dists) {
    const Eigen::Index b = batch.z.cols() / 2;
    FusionTape ftape;
    const Matrix v = fuse_batch(m.fusion, variant, batch.z, batch.phi, grad ? &ftape : nullptr);
    const Matrix va = v.leftCols(b), vb = v.rightCols(b);
    Matrix dv(v.rows(), v.cols());
    double loss;
    if (m.has_head) {
        Mlp2Tape htape;
        const Matrix logits = head_forward(va, vb, m.head, grad ? &htape : nullptr);
        const LossResult ce = cross_entropy(logits, batch.labels);
        loss = ce.loss;
        if (preds) {
            for (Eigen::Index j = 0; j < b; ++j) preds->push_back(argmax(logits, j));
        }
        if (grad) {
            const Matrix dcat = backward(m.head, htape, ce.grad, grad->head);
            dv.leftCols(b) = dcat.topRows(v.rows());
            dv.rightCols(b) = dcat.bottomRows(v.rows());
        }
    } else {
        const DistanceLoss dl = mse_distance(va, vb, batch.distances);
        loss = dl.loss;
        if (dists) dists->insert(dists->end(), dl.predicted.begin(), dl.predicted.end());
        if (grad) {
            dv.leftCols(b) = dl.grad_a;
            dv.rightCols(b) = dl.grad_b;
        }
    }
    if (grad) fuse_backward(m.fusion, variant, ftape, dv, grad->fusion);
    return loss;
}

Model zero_grads(const Model& m) {
    Model g;
    g.fusion = zeros_like(m.fusion);
    if (m.has_head) g.head = zeros_like(m.head);
    g.has_head = m.has_head;
    return g;
}

}  // namespace

SplitMetrics evaluate(const Model& m, const RunConfig& c, const EncodedPairs& data, Split split) {
    const std::vector<std::size_t> idx = indices_of(data, split);
    SplitMetrics out;
    out.count = idx.size();
    if (idx.empty()) return out;
    std::vector<int> preds, labels;
    std::vector<double> dists, truth;
    double loss_sum = 0.0;
    constexpr std::size_t kChunk = 512;
    for (std::size_t lo = 0; lo < idx.size(); lo += kChunk) {
        const std::size_t hi = std::min(idx.size(), lo + kChunk);
        const Batch batch = gather(data, idx, lo, hi);
        loss_sum += batch_step(m, c.variant, batch, nullptr, &preds, &dists) * static_cast<double>(hi - lo);
        labels.insert(labels.end(), batch.labels.begin(), batch.labels.end());
        truth.insert(truth.end(), batch.distances.begin(), batch.distances.end());
    }
    out.loss = loss_sum / static_cast<double>(idx.size());
    if (m.has_head) {
        out.cls = classification_metrics(preds, labels, m.head.out_dim());
    } else {
        out.mae = mean_absolute_error(dists, truth);
    }
    return out;
}

TrainResult train_model(const RunConfig& c, const EncodedPairs& data, std::uint64_t seed) {
    check_config(c);
    const auto start = std::chrono::steady_clock::now();
    TrainResult result;
    result.model = init_model(c, seed);
    Model& m = result.model;
    if (m.fusion.h_z.in_dim() != data.za.rows()) throw DataMismatch("feature count differs from the model grid");

    std::vector<std::size_t> order = indices_of(data, Split::Train);
    if (order.empty() && c.epochs > 0) throw DataMismatch("dataset has no training pairs");
    Rng shuffle_rng(seed ^ 0x6a09e667f3bcc909ull);
    AdamWState state;
    const AdamWOptions opt{c.lr, c.weight_decay, 0.9, 0.999, 1e-8};
    std::vector<Matrix*> params = trainable_tensors(m, c.variant);

    for (int epoch = 1; epoch <= c.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t lo = 0; lo < order.size(); lo += static_cast<std::size_t>(c.batch)) {
            const std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(c.batch));
            const Batch batch = gather(data, order, lo, hi);
            Model grad = zero_grads(m);
            const double loss = batch_step(m, c.variant, batch, &grad, nullptr, nullptr);
            if (!std::isfinite(loss)) {
                throw DivergedTraining("non-finite loss at epoch " + std::to_string(epoch) + ", pair offset " +
                                       std::to_string(lo) + "; try a smaller learning rate");
            }
            loss_sum += loss * static_cast<double>(hi - lo);
            const std::vector<Matrix*> g = trainable_tensors(grad, c.variant);
            adamw_step(params, std::vector<const Matrix*>(g.begin(), g.end()), state, opt);
        }
        EpochReport rep;
        rep.epoch = epoch;
        rep.train_loss = loss_sum / static_cast<double>(order.size());
        rep.val = evaluate(m, c, data, Split::Val);
        result.epochs.push_back(rep);
    }
    result.test = evaluate(m, c, data, Split::Test);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

double headline(const SplitMetrics& m, Task task) { return task == Task::Distance ? m.mae : m.cls.accuracy; }

}  // namespace polyenc
