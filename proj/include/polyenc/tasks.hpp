#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyenc/fusion.hpp"
#include "polyenc/geometry.hpp"

namespace polyenc {

class UnsupportedPair : public Error {
public:
    using Error::Error;
};

class CoincidentCentroids : public Error {
public:
    using Error::Error;
};

class GenerationBudgetExceeded : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

enum class Relation { Disjoint, Touches, Intersects, Contains, Within, Equals };

std::string relation_name(Relation r);

/// Ordered by the dimension of the first member, then the second.
enum class PairType { PointPoint, PointPolyline, PointPolygon, PolylinePolyline, PolylinePolygon, PolygonPolygon };

std::string pair_type_name(PairType t);  // "point-polygon", ...
PairType parse_pair_type(const std::string& name);

/// Pair type of (a, b); throws UnsupportedPair when a has the higher dimension.
PairType pair_type_of(const Geometry& a, const Geometry& b);

enum class Task { Topo, Direction, Distance };

std::string task_name(Task t);  // "topo", "direction", "distance"
Task parse_task(const std::string& name);

/// Relation names available for a pair type; a topo label is an index into
/// this list. Point-point has none.
///   point-polyline    disjoint, intersects
///   point-polygon     disjoint, contains
///   polyline-polyline disjoint, intersects
///   polyline-polygon  disjoint, touches, intersects, within
///   polygon-polygon   disjoint, touches, intersects, contains, within, equals
const std::vector<Relation>& topo_classes(PairType t);

/// Number of classes of a classification task; 0 for distance.
int class_count(Task task, PairType t);

/// Relation of a to b from exact predicates. Contains / Within read as
/// "a contains b" / "a within b". Point-polyline and polyline-polyline
/// report any contact as Intersects.
Relation relate(const Geometry& a, const Geometry& b);

/// Index of relate(a, b) in topo_classes(pair_type_of(a, b)). For point-polygon
/// the point being inside the polygon is the "contains" class. Throws
/// UnsupportedPair for point-point pairs and for relations outside the class
/// set (a point on a polygon boundary).
int topo_label(const Geometry& a, const Geometry& b);

/// 16-point compass class of the bearing from centroid(a) to centroid(b):
/// 0 = N, 1 = NNE, ..., 4 = E, ..., 8 = S, ..., clockwise; bins are
/// [center - 11.25, center + 11.25) degrees. Throws CoincidentCentroids.
int dir_label(const Geometry& a, const Geometry& b);
int compass_class(Point2 from, Point2 to);

/// Euclidean distance between the centroids.
double dist_label(const Geometry& a, const Geometry& b);

enum class Split { Train, Val, Test };

std::string split_name(Split s);
Split parse_split(const std::string& name);

struct PairSample {
    Geometry a;
    Geometry b;
    std::optional<int> topo;
    std::optional<int> dir;
    std::optional<double> dist;
    Split split = Split::Train;
};

/// Number of equal-width centroid-distance bins a distance set is balanced over.
inline constexpr int kDistanceBins = 10;
/// Upper edge of the last distance bin.
inline constexpr double kDistanceRange = 2.0;

struct GenConfig {
    Task task = Task::Topo;
    PairType pair_type = PairType::PointPolygon;
    int per_class = 500;  ///< per distance bin for the distance task
    std::uint64_t seed = 0;
    int max_attempts = 10000;  ///< per pair before GenerationBudgetExceeded
};

struct LabeledPairSet {
    GenConfig config;
    std::vector<PairSample> pairs;
};

/// Balanced synthetic pairs inside [-1, 1]^2. Every label is re-checked by
/// the predicates above before a pair is accepted. Each class is split
/// 60:20:20 into train/val/test; the final order is a seeded shuffle. The
/// result depends only on the config.
LabeledPairSet gen_pairs(const GenConfig& config);

/// Class id (or distance bin for the distance task) used for balancing.
int stratum(const PairSample& s, Task task);

// Random shape families, coordinates snapped to multiples of 2^-20.
Point2 random_point(Rng& rng, double lo = -1.0, double hi = 1.0);
Polyline random_polyline(Rng& rng, Point2 center, double radius);
/// Star-shaped about `center` with 4..12 vertices; `convex` puts every vertex
/// on one circle.
Polygon random_polygon(Rng& rng, Point2 center, double radius, bool convex);
Point2 snap(Point2 p);

/// [v_a; v_b] through the head MLP. Inputs are d x batch.
Matrix head_forward(const Matrix& va, const Matrix& vb, const Mlp2& head, Mlp2Tape* tape = nullptr);
std::vector<double> head_forward(const std::vector<double>& va, const std::vector<double>& vb, const Mlp2& head);

struct LossResult {
    double loss = 0.0;
    Matrix grad;  ///< same shape as the differentiated input
};

/// Mean cross-entropy of softmax(logits) (classes x batch) against labels.
LossResult cross_entropy(const Matrix& logits, const std::vector<int>& labels);

struct DistanceLoss {
    double loss = 0.0;
    Matrix grad_a;
    Matrix grad_b;
    std::vector<double> predicted;
};

/// Mean of (|v_a - v_b| - dist)^2 over the batch columns. The gradient of the
/// norm at v_a == v_b is taken as 0.
DistanceLoss mse_distance(const Matrix& va, const Matrix& vb, const std::vector<double>& dist);

struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;  ///< macro over classes present in the labels
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t count = 0;
};

ClassificationMetrics classification_metrics(const std::vector<int>& preds, const std::vector<int>& labels,
                                             int num_classes);
double mean_absolute_error(const std::vector<double>& preds, const std::vector<double>& labels);

/// JSON Lines: a header object {"format","version","config","config_hash"}
/// then one object per pair {"a","b","split", labels...} with GeoJSON
/// geometries. Parse errors carry the 1-based line number.
void write_dataset(std::ostream& out, const LabeledPairSet& set);
LabeledPairSet read_dataset(std::istream& in);

std::string gen_config_json(const GenConfig& c);
GenConfig gen_config_from_json(const std::string& text);

}  // namespace polyenc
