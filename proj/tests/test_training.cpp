#include <cmath>

#include "doctest.h"
#include "polyenc/training.hpp"

using namespace polyenc;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.task = Task::Topo;
    c.pair_type = PairType::PointPolygon;
    c.per_class = 40;
    c.epochs = 2;
    c.runs = 1;
    c.batch = 16;
    return c;
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("defaults") {
    const RunConfig c;
    CHECK(c.f_min == 0.1);
    CHECK(c.f_max == 1.0);
    CHECK(c.w_axis == 10);
    CHECK(c.d == 32);
    CHECK(c.lr == 1e-4);
    CHECK(c.weight_decay == 1e-8);
    CHECK(c.batch == 128);
    CHECK(c.epochs == 20);
    CHECK(grid_for(c).size() == 210);
    const FusionShape s = shape_for(c);
    CHECK(s.features == 210);
    CHECK(s.branch_hidden == 210);
    CHECK(s.d == 32);
}

TEST_CASE("config json round trip and hash") {
    RunConfig c = small_config();
    c.lr = 3e-4;
    c.variant = FusionVariant::Concat;
    c.dataset = "somewhere.jsonl";
    const RunConfig back = config_from_json(config_json(c, true));
    CHECK(config_json(back, true) == config_json(c, true));
    RunConfig moved = c;
    moved.dataset = "elsewhere.jsonl";
    CHECK(config_hash(moved) == config_hash(c));
    moved.seed = 1;
    CHECK(config_hash(moved) != config_hash(c));
    CHECK(config_json(c).find("dataset") == std::string::npos);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from_json(R"({"learning_rate": 1})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"task": "bogus"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"d": "wide"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
    RunConfig c;
    c.f_min = 2.0;
    CHECK_THROWS_AS(check_config(c), ConfigError);
    c = RunConfig{};
    c.task = Task::Topo;
    c.pair_type = PairType::PointPoint;
    CHECK_THROWS_AS(check_config(c), ConfigError);
}

TEST_CASE("untrained model is near chance on balanced binary data") {
    RunConfig c = small_config();
    c.per_class = 500;
    c.epochs = 0;
    const EncodedPairs data = encode_pairs(gen_pairs(gen_config_for(c)), grid_for(c), c.task);
    const TrainResult r = train_model(c, data, 0);
    CHECK(r.epochs.empty());
    CHECK(r.test.count == 200);
    CHECK(std::abs(r.test.cls.accuracy - 0.5) <= 0.05);
}

TEST_CASE("seeded training is repeatable") {
    const RunConfig c = small_config();
    const EncodedPairs data = encode_pairs(gen_pairs(gen_config_for(c)), grid_for(c), c.task);
    const TrainResult a = train_model(c, data, 5), b = train_model(c, data, 5), other = train_model(c, data, 6);
    REQUIRE(a.epochs.size() == 2);
    CHECK(a.epochs.back().train_loss == b.epochs.back().train_loss);
    CHECK(a.test.loss == b.test.loss);
    CHECK(a.model.fusion.h_final.l2.w == b.model.fusion.h_final.l2.w);
    CHECK(a.model.head.l1.w == b.model.head.l1.w);
    CHECK(a.test.loss != other.test.loss);
}

TEST_CASE("training lowers the training loss") {
    RunConfig c = small_config();
    c.epochs = 10;
    c.lr = 1e-3;
    const EncodedPairs data = encode_pairs(gen_pairs(gen_config_for(c)), grid_for(c), c.task);
    const TrainResult r = train_model(c, data, 1);
    CHECK(r.epochs.back().train_loss < r.epochs.front().train_loss);
}

TEST_CASE("distance training reports MAE") {
    RunConfig c = small_config();
    c.task = Task::Distance;
    c.pair_type = PairType::PointPoint;
    c.per_class = 5;
    const EncodedPairs data = encode_pairs(gen_pairs(gen_config_for(c)), grid_for(c), c.task);
    const TrainResult r = train_model(c, data, 1);
    CHECK_FALSE(r.model.has_head);
    CHECK(r.test.mae > 0.0);
    CHECK(headline(r.test, Task::Distance) == r.test.mae);
}

TEST_CASE("divergence is reported") {
    RunConfig c = small_config();
    c.lr = 1e200;
    c.epochs = 5;
    const EncodedPairs data = encode_pairs(gen_pairs(gen_config_for(c)), grid_for(c), c.task);
    CHECK_THROWS_AS(train_model(c, data, 1), DivergedTraining);
}

TEST_CASE("labels must match the task") {
    const RunConfig c = small_config();
    const LabeledPairSet set = gen_pairs(gen_config_for(c));
    CHECK_THROWS_AS(encode_pairs(set, grid_for(c), Task::Distance), DataMismatch);
    RunConfig wide = c;
    wide.w_axis = 5;
    const EncodedPairs data = encode_pairs(set, grid_for(wide), c.task);
    CHECK_THROWS_AS(train_model(c, data, 1), DataMismatch);
}

}  // TEST_SUITE
