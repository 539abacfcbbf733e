#include "polyenc/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyenc/io.hpp"
#include "polyenc/log.hpp"
#include "polyenc/training.hpp"
#include "polyenc/verify.hpp"

namespace polyenc {

namespace {

using json = nlohmann::json;

std::string fixed(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::string hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << data;
    if (!out.flush()) throw Error("write to '" + path + "' failed");
}

LabeledPairSet load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset '" + path + "'");
    try {
        return read_dataset(in);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
    try {
        return read_checkpoint(in);
    } catch (const ParseError& e) {
        throw CheckpointError(path + ": " + e.what());
    }
}

// Builds the model described by a checkpoint and fills in its tensors.
Model model_from_checkpoint(const Checkpoint& ck, RunConfig& cfg) {
    cfg = config_from_json(ck.config_json);
    Model m = init_model(cfg, 0);
    try {
        load_tensors(ck.tensors, model_tensors(m));
    } catch (const ShapeMismatch& e) {
        throw CheckpointMismatch(std::string("checkpoint tensors do not fit its config: ") + e.what());
    }
    return m;
}

const char* const kCompass[16] = {"N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
                                  "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"};

std::string class_label(Task task, PairType pt, int k) {
    switch (task) {
        case Task::Topo: return relation_name(topo_classes(pt)[static_cast<std::size_t>(k)]);
        case Task::Direction: return kCompass[k];
        case Task::Distance: {
            const double w = kDistanceRange / kDistanceBins;
            return "[" + fixed(k * w, 1) + "," + fixed((k + 1) * w, 1) + ")";
        }
    }
    return {};
}

json metrics_json(const SplitMetrics& m, Task task) {
    json j{{"count", m.count}, {"loss", m.loss}};
    if (task == Task::Distance) {
        j["mae"] = m.mae;
    } else {
        j["accuracy"] = m.cls.accuracy;
        j["precision"] = m.cls.precision;
        j["recall"] = m.cls.recall;
        j["f1"] = m.cls.f1;
    }
    return j;
}

std::vector<std::string> metric_names(Task task) {
    if (task == Task::Distance) return {"mae"};
    return {"accuracy", "precision", "recall", "f1"};
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

// Population standard deviation over runs.
MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    for (double x : xs) r.std += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(r.std / static_cast<double>(xs.size()));
    return r;
}

// Config file plus per-flag overrides. Keys set in either place are
// recorded as explicit.
class ConfigFlags {
public:
    void attach(CLI::App* app) {
        app->add_option("--config", path_, "JSON config file; flags override its keys");
        num(app, "f_min", "--f-min", &RunConfig::f_min, "smallest grid frequency");
        num(app, "f_max", "--f-max", &RunConfig::f_max, "largest grid frequency");
        num(app, "w_axis", "--w-axis", &RunConfig::w_axis, "frequencies per axis");
        num(app, "d", "--d", &RunConfig::d, "embedding width");
        num(app, "branch_hidden", "--branch-hidden", &RunConfig::branch_hidden, "branch MLP hidden width, 0 = grid size");
        num(app, "final_hidden", "--final-hidden", &RunConfig::final_hidden, "fusion MLP hidden width");
        num(app, "head_hidden", "--head-hidden", &RunConfig::head_hidden, "task head hidden width");
        str(app, "variant", "--variant", "fusion variant: learned, mag, phase, concat",
            [](RunConfig& c, const std::string& s) { c.variant = parse_variant(s); });
        str(app, "task", "--task", "topo, direction or distance",
            [](RunConfig& c, const std::string& s) { c.task = parse_task(s); });
        str(app, "pair_type", "--pair-type", "e.g. point-polygon",
            [](RunConfig& c, const std::string& s) { c.pair_type = parse_pair_type(s); });
        num(app, "per_class", "--per-class", &RunConfig::per_class, "pairs per class (per bin for distance)");
        num(app, "seed", "--seed", &RunConfig::seed, "base seed");
        num(app, "lr", "--lr", &RunConfig::lr, "learning rate");
        num(app, "weight_decay", "--weight-decay", &RunConfig::weight_decay, "AdamW weight decay");
        num(app, "batch", "--batch", &RunConfig::batch, "batch size");
        num(app, "epochs", "--epochs", &RunConfig::epochs, "training epochs");
        num(app, "runs", "--runs", &RunConfig::runs, "seeded runs (seed, seed+1, ...)");
        num(app, "dataset", "--dataset", &RunConfig::dataset, "dataset file (JSON Lines)");
        num(app, "checkpoint", "--checkpoint", &RunConfig::checkpoint, "model checkpoint file");
        num(app, "report", "--report", &RunConfig::report, "JSON report file");
        num(app, "output", "--output", &RunConfig::output, "output file");
    }

    RunConfig resolve() {
        RunConfig c;
        if (!path_.empty()) {
            std::string text;
            try {
                text = read_text(path_);
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
            c = config_from_json(text, c);
            const json keys = json::parse(text);
            for (const auto& item : keys.items()) explicit_.insert(item.key());
        }
        for (const Flag& f : flags_) {
            if (f.opt->count() == 0) continue;
            try {
                f.apply(c);
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
            explicit_.insert(f.key);
        }
        return c;
    }

    bool is_explicit(const std::string& key) const { return explicit_.count(key) > 0; }

private:
    struct Flag {
        std::string key;
        CLI::Option* opt;
        std::function<void(RunConfig&)> apply;
    };

    template <class T>
    void num(CLI::App* app, const std::string& key, const std::string& name, T RunConfig::*field,
             const std::string& help) {
        CLI::Option* opt = app->add_option(name, values_.*field, help);
        flags_.push_back({key, opt, [this, field](RunConfig& c) { c.*field = values_.*field; }});
    }

    void str(CLI::App* app, const std::string& key, const std::string& name, const std::string& help,
             std::function<void(RunConfig&, const std::string&)> set) {
        auto slot = std::make_shared<std::string>();
        CLI::Option* opt = app->add_option(name, *slot, help);
        flags_.push_back({key, opt, [slot, set](RunConfig& c) { set(c, *slot); }});
    }

    std::string path_;
    RunConfig values_;
    std::vector<Flag> flags_;
    std::set<std::string> explicit_;
};

// The dataset header decides task and pair type; a conflicting explicit
// setting is an error.
void adopt_dataset(RunConfig& c, const ConfigFlags& flags, const GenConfig& g) {
    if (flags.is_explicit("task") && c.task != g.task) {
        throw DataMismatch("dataset holds " + task_name(g.task) + " labels but task " + task_name(c.task) +
                           " was requested");
    }
    if (flags.is_explicit("pair_type") && c.pair_type != g.pair_type) {
        throw DataMismatch("dataset holds " + pair_type_name(g.pair_type) + " pairs but " +
                           pair_type_name(c.pair_type) + " was requested");
    }
    c.task = g.task;
    c.pair_type = g.pair_type;
    c.per_class = g.per_class;
}

LabeledPairSet dataset_for(RunConfig& c, const ConfigFlags& flags, std::ostream& out) {
    if (c.dataset.empty()) {
        out << "generating " << task_name(c.task) << " " << pair_type_name(c.pair_type) << " pairs, " << c.per_class
            << " per class, seed " << c.seed << "\n";
        return gen_pairs(gen_config_for(c));
    }
    LabeledPairSet set = load_dataset(c.dataset);
    adopt_dataset(c, flags, set.config);
    return set;
}

void print_histogram(const LabeledPairSet& set, std::ostream& out) {
    const Task task = set.config.task;
    const int classes = task == Task::Distance ? kDistanceBins : class_count(task, set.config.pair_type);
    std::vector<std::array<std::size_t, 3>> counts(static_cast<std::size_t>(classes), {0, 0, 0});
    for (const PairSample& s : set.pairs) counts[static_cast<std::size_t>(stratum(s, task))][static_cast<int>(s.split)]++;
    out << "class          train    val   test\n";
    for (int k = 0; k < classes; ++k) {
        const auto& c = counts[static_cast<std::size_t>(k)];
        char line[128];
        std::snprintf(line, sizeof line, "%-12s %7zu %6zu %6zu\n", class_label(task, set.config.pair_type, k).c_str(),
                      c[0], c[1], c[2]);
        out << line;
    }
    out << "total " << set.pairs.size() << "\n";
}

int cmd_gendata(ConfigFlags& flags, std::ostream& out) {
    RunConfig c = flags.resolve();
    check_config(c);
    if (c.output.empty()) throw ConfigError("gendata needs --output");
    const LabeledPairSet set = gen_pairs(gen_config_for(c));
    std::ostringstream ss;
    write_dataset(ss, set);
    write_text(c.output, ss.str());
    print_histogram(set, out);
    out << "wrote " << c.output << "\n";
    return kExitOk;
}

struct EncodeFlags {
    std::string input;
    std::string format = "csv";
    std::string raw;
    bool fresh = false;
};

int cmd_encode(ConfigFlags& flags, const EncodeFlags& ef, std::ostream& out) {
    RunConfig c = flags.resolve();
    if (c.output.empty()) throw ConfigError("encode needs --output");
    if (ef.input.empty()) throw ConfigError("encode needs --input");
    if (ef.fresh == !c.checkpoint.empty()) throw ConfigError("encode needs exactly one of --checkpoint and --fresh");
    Model model;
    if (ef.fresh) {
        check_config(c);
        model = init_model(c, c.seed);
    } else {
        const RunConfig given = c;
        model = model_from_checkpoint(load_checkpoint(given.checkpoint), c);
        c.output = given.output;
    }

    std::vector<Geometry> gs;
    {
        std::istringstream in(read_text(ef.input));
        std::string line;
        for (int lineno = 1; std::getline(in, line); ++lineno) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                gs.push_back(parse_geometry(line));
            } catch (const Error& e) {
                throw ParseError(ef.input + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }
    if (gs.empty()) throw EmptyInput("no geometries in '" + ef.input + "'");

    const FrequencyGrid grid = grid_for(c);
    Matrix z, phi;
    encode_features(gs, grid, z, phi);
    const Matrix rows = fuse_batch(model.fusion, c.variant, z, phi).transpose();
    const std::uint64_t hash = config_hash(c);
    const std::string stamp = "# config_hash=" + hex(hash) + "\n";
    if (ef.format == "bin") {
        std::ostringstream ss;
        write_embeddings_binary(ss, rows, hash);
        write_text(c.output, ss.str());
    } else {
        write_text(c.output, stamp + embeddings_to_csv(rows));
    }
    if (!ef.raw.empty()) {
        Matrix features(z.cols(), z.rows() + phi.rows());
        features << z.transpose(), phi.transpose();
        write_text(ef.raw, "# config_hash=" + hex(hash) + " columns=z[" + std::to_string(z.rows()) + "],phi[" +
                               std::to_string(phi.rows()) + "]\n" + embeddings_to_csv(features));
    }
    out << "encoded " << gs.size() << " geometries to width " << rows.cols() << "\n";
    return kExitOk;
}

struct RunSummary {
    json report;
    std::vector<double> headline;
};

// `c.runs` seeded trainings on one encoded dataset.
RunSummary train_runs(const RunConfig& c, const EncodedPairs& data, std::ostream& out, Model* first_model) {
    RunSummary s;
    std::map<std::string, std::vector<double>> per_metric;
    json runs = json::array();
    for (int r = 0; r < c.runs; ++r) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(r);
        TrainResult res = train_model(c, data, seed);
        json epochs = json::array();
        for (const EpochReport& e : res.epochs) {
            epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val", metrics_json(e.val, c.task)}});
        }
        const json test = metrics_json(res.test, c.task);
        runs.push_back({{"seed", seed}, {"epochs", epochs}, {"test", test}});
        for (const std::string& name : metric_names(c.task)) per_metric[name].push_back(test[name].get<double>());
        s.headline.push_back(headline(res.test, c.task));
        out << "  " << variant_name(c.variant) << " run " << r + 1 << "/" << c.runs << " seed " << seed << ": test "
            << (c.task == Task::Distance ? "mae " : "accuracy ") << fixed(s.headline.back()) << " ("
            << fixed(res.seconds, 1) << " s)\n";
        if (r == 0 && first_model) *first_model = std::move(res.model);
    }
    json summary = json::object();
    for (const auto& [name, xs] : per_metric) {
        const MeanStd ms = mean_std(xs);
        summary[name] = {{"mean", ms.mean}, {"std", ms.std}};
    }
    s.report = {{"runs", runs}, {"summary", summary}};
    return s;
}

json report_header(const std::string& command, const RunConfig& c) {
    return {{"command", command}, {"config", json::parse(config_json(c))}, {"config_hash", hex(config_hash(c))}};
}

void write_report(const RunConfig& c, const json& report) {
    if (!c.report.empty()) write_text(c.report, report.dump(2) + "\n");
}

int cmd_train(ConfigFlags& flags, std::ostream& out) {
    RunConfig c = flags.resolve();
    const LabeledPairSet set = dataset_for(c, flags, out);
    check_config(c);
    const EncodedPairs data = encode_pairs(set, grid_for(c), c.task);
    Model first;
    RunSummary s = train_runs(c, data, out, &first);
    json report = report_header("train", c);
    const std::string gen_json = gen_config_json(set.config);
    report["dataset_config_hash"] = hex(fnv1a(gen_json.data(), gen_json.size()));
    report.update(s.report);
    write_report(c, report);
    if (!c.checkpoint.empty()) {
        std::ostringstream ss;
        const std::vector<Matrix*> t = model_tensors(first);
        write_checkpoint(ss, config_json(c), std::vector<const Matrix*>(t.begin(), t.end()));
        write_text(c.checkpoint, ss.str());
    }
    out << "metric       mean     std\n";
    for (const std::string& name : metric_names(c.task)) {
        const json& m = report["summary"][name];
        char line[96];
        std::snprintf(line, sizeof line, "%-10s %7.4f  %6.4f\n", name.c_str(), m["mean"].get<double>(),
                      m["std"].get<double>());
        out << line;
    }
    return kExitOk;
}

int cmd_eval(ConfigFlags& flags, const std::string& split_name_arg, std::ostream& out) {
    RunConfig given = flags.resolve();
    if (given.checkpoint.empty()) throw ConfigError("eval needs --checkpoint");
    if (given.dataset.empty()) throw ConfigError("eval needs --dataset");
    RunConfig c;
    const Model model = model_from_checkpoint(load_checkpoint(given.checkpoint), c);
    auto same = [&](const char* key, bool equal) {
        if (flags.is_explicit(key) && !equal) {
            throw CheckpointMismatch(std::string("checkpoint was trained with a different ") + key);
        }
    };
    same("f_min", given.f_min == c.f_min);
    same("f_max", given.f_max == c.f_max);
    same("w_axis", given.w_axis == c.w_axis);
    same("d", given.d == c.d);
    const LabeledPairSet set = load_dataset(given.dataset);
    if (set.config.task != c.task || set.config.pair_type != c.pair_type) {
        throw DataMismatch("checkpoint is for " + task_name(c.task) + " " + pair_type_name(c.pair_type) +
                           ", dataset holds " + task_name(set.config.task) + " " +
                           pair_type_name(set.config.pair_type));
    }
    const Split split = parse_split(split_name_arg);
    const SplitMetrics m = evaluate(model, c, encode_pairs(set, grid_for(c), c.task), split);
    json report = report_header("eval", c);
    report["split"] = split_name(split);
    report["metrics"] = metrics_json(m, c.task);
    c.report = given.report;
    write_report(c, report);
    out << split_name(split) << " pairs " << m.count << "\n";
    for (const std::string& name : metric_names(c.task)) {
        out << name << std::string(12 - name.size(), ' ') << fixed(report["metrics"][name].get<double>()) << "\n";
    }
    return kExitOk;
}

struct VerifyFlags {
    VerifyOptions opt;
    double tol = 0.0;
    std::string mutate;
    std::string report;
};

int cmd_verify(VerifyFlags& vf, bool tol_given, std::ostream& out) {
    if (tol_given) vf.opt.tolerance = vf.tol;
    if (!vf.mutate.empty()) {
        if (vf.mutate != "sinc") throw ConfigError("unknown mutation '" + vf.mutate + "' (only: sinc)");
        vf.opt.mutate_sinc = true;
    }
    if (vf.opt.count <= 0) throw ConfigError("--count must be positive");
    const std::vector<CheckResult> results = run_verify(vf.opt);
    bool ok = true;
    json checks = json::array();
    for (const CheckResult& r : results) {
        ok = ok && r.passed;
        char line[200];
        std::snprintf(line, sizeof line, "%-4s %-38s max %-10s tol %-8s %s\n", r.passed ? "PASS" : "FAIL",
                      r.name.c_str(), sci(r.max_error).c_str(), sci(r.tolerance).c_str(), r.detail.c_str());
        out << line;
        checks.push_back({{"name", r.name},
                          {"max_error", r.max_error},
                          {"tolerance", r.tolerance},
                          {"passed", r.passed},
                          {"detail", r.detail}});
    }
    out << (ok ? "all checks passed\n" : "verification FAILED\n");
    if (!vf.report.empty()) {
        const json report{{"command", "verify"},
                          {"count", vf.opt.count},
                          {"seed", vf.opt.seed},
                          {"mutate_sinc", vf.opt.mutate_sinc},
                          {"checks", checks},
                          {"passed", ok}};
        write_text(vf.report, report.dump(2) + "\n");
    }
    return ok ? kExitOk : kExitVerify;
}

int cmd_ablate(ConfigFlags& flags, std::ostream& out) {
    RunConfig c = flags.resolve();
    const LabeledPairSet set = dataset_for(c, flags, out);
    check_config(c);
    const EncodedPairs data = encode_pairs(set, grid_for(c), c.task);
    const FusionVariant order[] = {FusionVariant::Learned, FusionVariant::Concat, FusionVariant::PhaseOnly,
                                   FusionVariant::MagOnly};
    json report = report_header("ablate", c);
    json variants = json::object();
    std::map<FusionVariant, double> means;
    for (FusionVariant v : order) {
        RunConfig cv = c;
        cv.variant = v;
        RunSummary s = train_runs(cv, data, out, nullptr);
        const MeanStd ms = mean_std(s.headline);
        means[v] = ms.mean;
        s.report["headline"] = {{"mean", ms.mean}, {"std", ms.std}};
        variants[variant_name(v)] = s.report;
    }
    report["variants"] = variants;
    // Higher is better except for distance error.
    const double sign = c.task == Task::Distance ? -1.0 : 1.0;
    const bool learned_ge_concat = sign * means[FusionVariant::Learned] >= sign * means[FusionVariant::Concat];
    bool mag_worst = true;
    for (FusionVariant v : order) {
        if (v != FusionVariant::MagOnly && sign * means[v] < sign * means[FusionVariant::MagOnly]) mag_worst = false;
    }
    report["learned_ge_concat"] = learned_ge_concat;
    report["mag_worst"] = mag_worst;
    write_report(c, report);
    out << "variant   " << (c.task == Task::Distance ? "mae" : "accuracy") << " mean    std\n";
    for (FusionVariant v : order) {
        const json& h = variants[variant_name(v)]["headline"];
        char line[96];
        std::snprintf(line, sizeof line, "%-8s  %8.4f  %6.4f\n", variant_name(v).c_str(), h["mean"].get<double>(),
                      h["std"].get<double>());
        out << line;
    }
    out << "learned >= concat: " << (learned_ge_concat ? "yes" : "no") << "\n";
    out << "mag worst: " << (mag_worst ? "yes" : "no") << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral geometry encoder: data generation, training, evaluation and verification", "polyenc"};
    app.require_subcommand(1);

    ConfigFlags gendata_flags, encode_flags, train_flags, eval_flags, ablate_flags;
    CLI::App* gendata = app.add_subcommand("gendata", "generate a labeled pair dataset");
    gendata_flags.attach(gendata);

    CLI::App* encode = app.add_subcommand("encode", "embed geometries, one WKT or GeoJSON per line");
    encode_flags.attach(encode);
    EncodeFlags ef;
    encode->add_option("--input", ef.input, "geometry file");
    encode->add_option("--format", ef.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
    encode->add_option("--raw", ef.raw, "also write magnitude and phase features as CSV");
    encode->add_flag("--fresh", ef.fresh, "use freshly initialized parameters (seeded) instead of a checkpoint");

    CLI::App* train = app.add_subcommand("train", "train fusion and task head; report mean and std over runs");
    train_flags.attach(train);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset split");
    eval_flags.attach(eval);
    std::string eval_split = "test";
    eval->add_option("--split", eval_split, "train, val or test");

    CLI::App* verify = app.add_subcommand("verify", "closed forms against quadrature, invariants, gradient checks");
    VerifyFlags vf;
    verify->add_option("--count", vf.opt.count, "random shapes per check");
    verify->add_option("--seed", vf.opt.seed, "seed");
    CLI::Option* tol = verify->add_option("--tol", vf.tol, "tolerance applied to every check");
    verify->add_option("--mutate", vf.mutate, "negative control; 'sinc' corrupts the segment transform");
    verify->add_option("--report", vf.report, "JSON report file");

    CLI::App* ablate = app.add_subcommand("ablate", "compare learned, concat, phase-only and magnitude-only fusion");
    ablate_flags.attach(ablate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    const WarningSink previous = set_warning_sink([&err](std::string_view msg) { err << "warning: " << msg << "\n"; });
    int code = kExitOk;
    try {
        if (active == gendata) code = cmd_gendata(gendata_flags, out);
        else if (active == encode) code = cmd_encode(encode_flags, ef, out);
        else if (active == train) code = cmd_train(train_flags, out);
        else if (active == eval) code = cmd_eval(eval_flags, eval_split, out);
        else if (active == verify) code = cmd_verify(vf, tol->count() > 0, out);
        else code = cmd_ablate(ablate_flags, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        code = kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        code = kExitData;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        code = kExitData;
    }
    set_warning_sink(previous);
    return code;
}

}  // namespace polyenc
