#include "polyenc/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "polyenc/io.hpp"
#include "polyenc/log.hpp"
#include "polyenc/triangulation.hpp"

namespace polyenc {

using json = nlohmann::json;

std::string split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

Split parse_split(const std::string& name) {
    for (Split s : {Split::Train, Split::Val, Split::Test}) {
        if (split_name(s) == name) return s;
    }
    throw ParseError("unknown split '" + name + "'");
}

// ---------------------------------------------------------------- shapes

namespace {

constexpr double kLattice = 1048576.0;  // 2^20
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_unit_box(const Geometry& g) {
    const BoundingBox bb = bounding_box(g);
    return bb.min_x >= -1.0 && bb.min_y >= -1.0 && bb.max_x <= 1.0 && bb.max_y <= 1.0;
}

// Point at fraction k/8 along [p, q]. Exact for lattice endpoints, so the
// result lies exactly on the segment.
Point2 eighth_point(Point2 p, Point2 q, int k) { return p + (k / 8.0) * (q - p); }

Ring close_ring(std::vector<Point2> pts) {
    pts.push_back(pts.front());
    return pts;
}

Ring rotate_ring(const Ring& ring, std::size_t start) {
    std::vector<Point2> open(ring.begin(), ring.end() - 1);
    std::rotate(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(start % open.size()), open.end());
    return close_ring(std::move(open));
}

}  // namespace

Point2 snap(Point2 p) {
    auto s = [](double x) { return std::clamp(std::round(x * kLattice) / kLattice, -1.0, 1.0); };
    return {s(p.x), s(p.y)};
}

Point2 random_point(Rng& rng, double lo, double hi) { return snap({rng.uniform(lo, hi), rng.uniform(lo, hi)}); }

Polyline random_polyline(Rng& rng, Point2 center, double radius) {
    const int n = 2 + static_cast<int>(rng.below(5));
    Polyline pl;
    while (static_cast<int>(pl.vertices.size()) < n) {
        const double ang = rng.uniform(0.0, kTwoPi);
        const double r = radius * std::sqrt(rng.uniform());
        const Point2 p = snap({center.x + r * std::cos(ang), center.y + r * std::sin(ang)});
        if (pl.vertices.empty() || !(pl.vertices.back() == p)) pl.vertices.push_back(p);
    }
    return pl;
}

Polygon random_polygon(Rng& rng, Point2 center, double radius, bool convex) {
    const int n = 4 + static_cast<int>(rng.below(9));
    const double start = rng.uniform(0.0, kTwoPi);
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        const double ang = start + kTwoPi * (i + 0.8 * (rng.uniform() - 0.5)) / n;
        const double r = convex ? radius : radius * rng.uniform(0.35, 1.0);
        const Point2 p = snap({center.x + r * std::cos(ang), center.y + r * std::sin(ang)});
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    Polygon pg;
    pg.exterior = close_ring(std::move(pts));
    return pg;
}

// ---------------------------------------------------------------- generator

namespace {

std::uint64_t stream_seed(const GenConfig& c, int cls, int index) {
    const std::uint64_t words[] = {c.seed, static_cast<std::uint64_t>(c.task), static_cast<std::uint64_t>(c.pair_type),
                                   static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(index)};
    return fnv1a(words, sizeof(words));
}

std::pair<GeometryKind, GeometryKind> kinds_of(PairType t) {
    using K = GeometryKind;
    switch (t) {
        case PairType::PointPoint: return {K::Point, K::Point};
        case PairType::PointPolyline: return {K::Point, K::Polyline};
        case PairType::PointPolygon: return {K::Point, K::Polygon};
        case PairType::PolylinePolyline: return {K::Polyline, K::Polyline};
        case PairType::PolylinePolygon: return {K::Polyline, K::Polygon};
        case PairType::PolygonPolygon: return {K::Polygon, K::Polygon};
    }
    return {K::Point, K::Point};
}

// A shape of the given kind around the origin.
Geometry shape_at_origin(GeometryKind kind, Rng& rng) {
    const double radius = rng.uniform(0.05, 0.3);
    switch (kind) {
        case GeometryKind::Point: return Geometry(Point2{0.0, 0.0});
        case GeometryKind::Polyline: return Geometry(random_polyline(rng, {0.0, 0.0}, radius));
        default: return Geometry(random_polygon(rng, {0.0, 0.0}, radius, rng.below(2) == 0));
    }
}

// Moves g by a lattice vector so its centroid lands near `target`.
Geometry place(const Geometry& g, Point2 target) { return translated(g, snap(target - centroid(g))); }

using Candidate = std::optional<std::pair<Geometry, Geometry>>;

Point2 random_center(Rng& rng, double radius) { return random_point(rng, -1.0 + radius, 1.0 - radius); }

Polygon random_polygon_in_box(Rng& rng, double rmin, double rmax, bool convex, Point2* center = nullptr,
                              double* radius = nullptr) {
    const double r = rng.uniform(rmin, rmax);
    const Point2 c = random_center(rng, r);
    if (center) *center = c;
    if (radius) *radius = r;
    return random_polygon(rng, c, r, convex);
}

Candidate topo_candidate(PairType t, int cls, Rng& rng) {
    const Relation want = topo_classes(t).at(static_cast<std::size_t>(cls));
    const bool convex = rng.below(2) == 0;
    switch (t) {
        case PairType::PointPolyline: {
            const double r = rng.uniform(0.2, 0.6);
            const Polyline pl = random_polyline(rng, random_center(rng, r), r);
            if (want == Relation::Disjoint) return std::pair{Geometry(random_point(rng)), Geometry(pl)};
            const std::size_t i = rng.below(pl.vertices.size() - 1);
            const Point2 p = eighth_point(pl.vertices[i], pl.vertices[i + 1], static_cast<int>(rng.below(9)));
            return std::pair{Geometry(p), Geometry(pl)};
        }
        case PairType::PointPolygon: {
            Point2 c;
            double r;
            const Polygon pg = random_polygon_in_box(rng, 0.2, 0.7, convex, &c, &r);
            if (want == Relation::Disjoint) return std::pair{Geometry(random_point(rng)), Geometry(pg)};
            return std::pair{Geometry(snap({c.x + r * rng.uniform(-1.0, 1.0), c.y + r * rng.uniform(-1.0, 1.0)})),
                             Geometry(pg)};
        }
        case PairType::PolylinePolyline: {
            const double r = rng.uniform(0.15, 0.5);
            const Polyline a = random_polyline(rng, random_center(rng, r), r);
            if (want == Relation::Disjoint) {
                const double s = rng.uniform(0.15, 0.5);
                return std::pair{Geometry(a), Geometry(random_polyline(rng, random_center(rng, s), s))};
            }
            const std::size_t i = rng.below(a.vertices.size() - 1);
            const Point2 hit = eighth_point(a.vertices[i], a.vertices[i + 1], static_cast<int>(rng.below(9)));
            Polyline b = random_polyline(rng, hit, rng.uniform(0.1, 0.4));
            b.vertices.insert(b.vertices.begin() + static_cast<std::ptrdiff_t>(rng.below(b.vertices.size() + 1)), hit);
            b.vertices.erase(std::unique(b.vertices.begin(), b.vertices.end()), b.vertices.end());
            return std::pair{Geometry(a), Geometry(b)};
        }
        case PairType::PolylinePolygon: {
            Point2 c;
            double r;
            const Polygon pg = random_polygon_in_box(rng, 0.2, 0.6, want == Relation::Within || convex, &c, &r);
            Polyline pl;
            switch (want) {
                case Relation::Disjoint: {
                    const double s = rng.uniform(0.1, 0.4);
                    pl = random_polyline(rng, random_center(rng, s), s);
                    break;
                }
                case Relation::Touches: {
                    // Start on a boundary edge and head into the outer half-plane.
                    const Ring& ring = pg.exterior;
                    const std::size_t i = rng.below(ring.size() - 1);
                    const Point2 p = ring[i], q = ring[i + 1];
                    const Point2 t = eighth_point(p, q, static_cast<int>(rng.below(9)));
                    const Point2 d = q - p;
                    const double len = std::hypot(d.x, d.y);
                    const Point2 out{d.y / len, -d.x / len};
                    const Point2 along{d.x / len, d.y / len};
                    pl.vertices.push_back(t);
                    const int n = 1 + static_cast<int>(rng.below(4));
                    for (int k = 0; k < n; ++k) {
                        const double h = rng.uniform(0.05, 0.4);
                        const double s = rng.uniform(-0.3, 0.3);
                        pl.vertices.push_back(snap(t + h * out + s * along));
                    }
                    if (rng.below(2) == 0) std::reverse(pl.vertices.begin(), pl.vertices.end());
                    break;
                }
                case Relation::Intersects: {
                    const double ang = rng.uniform(0.0, kTwoPi);
                    const Point2 dir{std::cos(ang), std::sin(ang)};
                    pl.vertices.push_back(snap(c + rng.uniform(0.0, 0.4 * r) * dir));
                    pl.vertices.push_back(snap(c + rng.uniform(1.1 * r, 1.8 * r) * dir));
                    if (rng.below(2) == 0) std::reverse(pl.vertices.begin(), pl.vertices.end());
                    break;
                }
                default:
                    pl = random_polyline(rng, c, 0.6 * r);
                    break;
            }
            return std::pair{Geometry(pl), Geometry(pg)};
        }
        case PairType::PolygonPolygon: {
            Point2 c;
            double r;
            switch (want) {
                case Relation::Disjoint: {
                    const Polygon a = random_polygon_in_box(rng, 0.1, 0.45, convex);
                    const Polygon b = random_polygon_in_box(rng, 0.1, 0.45, rng.below(2) == 0);
                    return std::pair{Geometry(a), Geometry(b)};
                }
                case Relation::Touches: {
                    // Quadrilateral on the outside of a sub-edge of a convex polygon.
                    const Polygon a = random_polygon_in_box(rng, 0.15, 0.5, true, &c, &r);
                    const Ring& ring = a.exterior;
                    const std::size_t i = rng.below(ring.size() - 1);
                    int k1 = static_cast<int>(rng.below(8));
                    int k2 = k1 + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(8 - k1)));
                    const Point2 t1 = eighth_point(ring[i], ring[i + 1], k1);
                    const Point2 t2 = eighth_point(ring[i], ring[i + 1], k2);
                    const Point2 d = t2 - t1;
                    const double len = std::hypot(d.x, d.y);
                    const Point2 out{d.y / len, -d.x / len};
                    const double h = rng.uniform(0.05, 0.4);
                    const Point2 w1 = snap(t1 + h * out + rng.uniform(-0.2, 0.2) * d);
                    const Point2 w2 = snap(t2 + h * out + rng.uniform(-0.2, 0.2) * d);
                    Polygon b;
                    b.exterior = close_ring({t2, t1, w1, w2});
                    return std::pair{Geometry(a), Geometry(b)};
                }
                case Relation::Intersects: {
                    const Polygon a = random_polygon_in_box(rng, 0.15, 0.5, convex, &c, &r);
                    const double ang = rng.uniform(0.0, kTwoPi);
                    const double s = rng.uniform(0.1, 0.5);
                    const Point2 cb = c + rng.uniform(0.5, 1.1) * r * Point2{std::cos(ang), std::sin(ang)};
                    return std::pair{Geometry(a), Geometry(random_polygon(rng, cb, s, rng.below(2) == 0))};
                }
                case Relation::Contains:
                case Relation::Within: {
                    const Polygon outer = random_polygon_in_box(rng, 0.2, 0.7, convex, &c, &r);
                    const double s = rng.uniform(0.2, 0.8);
                    std::vector<Point2> inner;
                    for (std::size_t i = 0; i + 1 < outer.exterior.size(); ++i) {
                        inner.push_back(snap(c + s * (outer.exterior[i] - c)));
                    }
                    Polygon b;
                    b.exterior = close_ring(std::move(inner));
                    if (want == Relation::Contains) return std::pair{Geometry(outer), Geometry(b)};
                    return std::pair{Geometry(b), Geometry(outer)};
                }
                default: {
                    const Polygon a = random_polygon_in_box(rng, 0.1, 0.7, convex);
                    Polygon b;
                    b.exterior = rotate_ring(a.exterior, rng.below(a.exterior.size() - 1));
                    return std::pair{Geometry(a), Geometry(b)};
                }
            }
        }
        case PairType::PointPoint: break;
    }
    throw UnsupportedPair("no topological classes for " + pair_type_name(t) + " pairs");
}

// Offset of the second centroid from the first, for class `cls`.
Candidate offset_candidate(const GenConfig& cfg, int cls, Rng& rng) {
    const auto [ka, kb] = kinds_of(cfg.pair_type);
    double bearing, dist;
    if (cfg.task == Task::Direction) {
        // Keep clear of bin edges so rounding cannot move the label.
        bearing = (22.5 * cls + rng.uniform(-10.0, 10.0)) * std::numbers::pi / 180.0;
        dist = rng.uniform(0.1, 1.2);
    } else {
        bearing = rng.uniform(0.0, kTwoPi);
        const double width = kDistanceRange / kDistanceBins;
        dist = width * (cls + rng.uniform());
    }
    const Point2 offset{dist * std::sin(bearing), dist * std::cos(bearing)};
    // Centers for which both ends stay in the box.
    const double margin = ka == GeometryKind::Point && kb == GeometryKind::Point ? 0.0 : 0.3;
    const double lo_x = std::max(-1.0, -1.0 - offset.x) + margin, hi_x = std::min(1.0, 1.0 - offset.x) - margin;
    const double lo_y = std::max(-1.0, -1.0 - offset.y) + margin, hi_y = std::min(1.0, 1.0 - offset.y) - margin;
    if (!(lo_x < hi_x) || !(lo_y < hi_y)) return std::nullopt;
    const Point2 ca{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
    Geometry a = place(shape_at_origin(ka, rng), ca);
    Geometry b = place(shape_at_origin(kb, rng), centroid(a) + offset);
    return std::pair{std::move(a), std::move(b)};
}

bool accept(const GenConfig& cfg, int cls, const Geometry& a, const Geometry& b) {
    if (!in_unit_box(a) || !in_unit_box(b)) return false;
    switch (cfg.task) {
        case Task::Topo: return topo_label(a, b) == cls;
        case Task::Direction: return !(centroid(a) == centroid(b)) && dir_label(a, b) == cls;
        case Task::Distance: {
            const double width = kDistanceRange / kDistanceBins;
            const double d = dist_label(a, b);
            return d >= width * cls && d < width * (cls + 1);
        }
    }
    return false;
}

PairSample generate_one(const GenConfig& cfg, int cls, int index) {
    Rng rng(stream_seed(cfg, cls, index));
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        Candidate cand = cfg.task == Task::Topo ? topo_candidate(cfg.pair_type, cls, rng) : offset_candidate(cfg, cls, rng);
        if (!cand) continue;
        try {
            Geometry a = validate(cand->first);
            Geometry b = validate(cand->second);
            if (!accept(cfg, cls, a, b)) continue;
            PairSample s{std::move(a), std::move(b), std::nullopt, std::nullopt, std::nullopt, Split::Train};
            switch (cfg.task) {
                case Task::Topo: s.topo = cls; break;
                case Task::Direction: s.dir = cls; break;
                case Task::Distance: s.dist = dist_label(s.a, s.b); break;
            }
            return s;
        } catch (const ValidationError&) {
            continue;
        } catch (const UnsupportedPair&) {
            continue;  // e.g. a point landing on a polygon boundary
        }
    }
    throw GenerationBudgetExceeded("class " + std::to_string(cls) + " of " + task_name(cfg.task) + "/" +
                                   pair_type_name(cfg.pair_type) + " needed more than " +
                                   std::to_string(cfg.max_attempts) + " attempts");
}

}  // namespace

int stratum(const PairSample& s, Task task) {
    switch (task) {
        case Task::Topo: return s.topo.value_or(-1);
        case Task::Direction: return s.dir.value_or(-1);
        case Task::Distance: {
            const int bin = static_cast<int>(std::floor(s.dist.value_or(0.0) / (kDistanceRange / kDistanceBins)));
            return std::clamp(bin, 0, kDistanceBins - 1);
        }
    }
    return -1;
}

LabeledPairSet gen_pairs(const GenConfig& cfg) {
    if (cfg.per_class <= 0) throw Error("per-class count must be positive");
    const int strata = cfg.task == Task::Distance ? kDistanceBins : class_count(cfg.task, cfg.pair_type);
    if (strata == 0) throw UnsupportedPair("no topological classes for " + pair_type_name(cfg.pair_type) + " pairs");
    LabeledPairSet out;
    out.config = cfg;
    const int n = cfg.per_class;
    const int n_train = static_cast<int>(std::lround(0.6 * n));
    const int n_val = static_cast<int>(std::lround(0.2 * n));
    for (int cls = 0; cls < strata; ++cls) {
        for (int i = 0; i < n; ++i) {
            PairSample s = generate_one(cfg, cls, i);
            s.split = i < n_train ? Split::Train : (i < n_train + n_val ? Split::Val : Split::Test);
            out.pairs.push_back(std::move(s));
        }
    }
    Rng order(stream_seed(cfg, -1, -1));
    order.shuffle(out.pairs);
    return out;
}

// ---------------------------------------------------------------- heads and losses

Matrix head_forward(const Matrix& va, const Matrix& vb, const Mlp2& head, Mlp2Tape* tape) {
    if (va.rows() != vb.rows() || va.cols() != vb.cols()) throw ShapeMismatch("embedding batches differ in shape");
    if (head.in_dim() != 2 * va.rows()) throw ShapeMismatch("head input must be twice the embedding size");
    Matrix cat(2 * va.rows(), va.cols());
    cat << va, vb;
    return forward(head, cat, tape);
}

std::vector<double> head_forward(const std::vector<double>& va, const std::vector<double>& vb, const Mlp2& head) {
    const auto d = static_cast<Eigen::Index>(va.size());
    if (vb.size() != va.size()) throw ShapeMismatch("embeddings differ in size");
    const Matrix a = Eigen::Map<const Eigen::VectorXd>(va.data(), d);
    const Matrix b = Eigen::Map<const Eigen::VectorXd>(vb.data(), d);
    const Matrix y = head_forward(a, b, head);
    return {y.data(), y.data() + y.size()};
}

LossResult cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(logits.cols()) != labels.size()) throw ShapeMismatch("one label per logit column");
    if (labels.empty()) throw EmptyInput("empty batch");
    LossResult r;
    r.grad.resize(logits.rows(), logits.cols());
    const double scale = 1.0 / static_cast<double>(labels.size());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const int y = labels[static_cast<std::size_t>(j)];
        if (y < 0 || y >= logits.rows()) throw ShapeMismatch("label out of range");
        const double m = logits.col(j).maxCoeff();
        const Eigen::VectorXd e = (logits.col(j).array() - m).exp();
        const double sum = e.sum();
        r.loss += (m + std::log(sum) - logits(y, j)) * scale;
        r.grad.col(j) = e * (scale / sum);
        r.grad(y, j) -= scale;
    }
    return r;
}

DistanceLoss mse_distance(const Matrix& va, const Matrix& vb, const std::vector<double>& dist) {
    if (va.rows() != vb.rows() || va.cols() != vb.cols()) throw ShapeMismatch("embedding batches differ in shape");
    if (static_cast<std::size_t>(va.cols()) != dist.size()) throw ShapeMismatch("one distance per column");
    if (dist.empty()) throw EmptyInput("empty batch");
    DistanceLoss r;
    r.grad_a = Matrix::Zero(va.rows(), va.cols());
    const double scale = 1.0 / static_cast<double>(dist.size());
    for (Eigen::Index j = 0; j < va.cols(); ++j) {
        const Eigen::VectorXd diff = va.col(j) - vb.col(j);
        const double n = diff.norm();
        const double resid = n - dist[static_cast<std::size_t>(j)];
        r.loss += resid * resid * scale;
        r.predicted.push_back(n);
        if (n > 0.0) r.grad_a.col(j) = (2.0 * resid * scale / n) * diff;
    }
    r.grad_b = -r.grad_a;
    return r;
}

// ---------------------------------------------------------------- metrics

ClassificationMetrics classification_metrics(const std::vector<int>& preds, const std::vector<int>& labels,
                                             int num_classes) {
    if (preds.size() != labels.size()) throw ShapeMismatch("predictions and labels differ in length");
    if (preds.empty()) throw EmptyInput("no predictions");
    const auto k = static_cast<std::size_t>(num_classes);
    std::vector<double> tp(k, 0.0), fp(k, 0.0), fn(k, 0.0);
    std::vector<bool> present(k, false);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i], y = labels[i];
        if (y < 0 || y >= num_classes) throw ShapeMismatch("label out of range");
        present[static_cast<std::size_t>(y)] = true;
        if (p == y) {
            ++correct;
            tp[static_cast<std::size_t>(y)] += 1.0;
        } else {
            fn[static_cast<std::size_t>(y)] += 1.0;
            if (p >= 0 && p < num_classes) fp[static_cast<std::size_t>(p)] += 1.0;
        }
    }
    ClassificationMetrics m;
    m.count = preds.size();
    m.accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
    int used = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (!present[c]) continue;
        ++used;
        const double prec = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
        const double rec = tp[c] / (tp[c] + fn[c]);
        m.precision += prec;
        m.recall += rec;
        m.f1 += prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    }
    if (used < num_classes) {
        warn(std::to_string(num_classes - used) + " class(es) absent from labels; excluded from macro averages");
    }
    m.precision /= used;
    m.recall /= used;
    m.f1 /= used;
    return m;
}

double mean_absolute_error(const std::vector<double>& preds, const std::vector<double>& labels) {
    if (preds.size() != labels.size()) throw ShapeMismatch("predictions and labels differ in length");
    if (preds.empty()) throw EmptyInput("no predictions");
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) sum += std::abs(preds[i] - labels[i]);
    return sum / static_cast<double>(preds.size());
}

// ---------------------------------------------------------------- dataset files

namespace {

json gen_config_object(const GenConfig& c) {
    return json{{"task", task_name(c.task)},
                {"pair_type", pair_type_name(c.pair_type)},
                {"per_class", c.per_class},
                {"seed", c.seed},
                {"max_attempts", c.max_attempts}};
}

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 15];
    return s;
}

}  // namespace

std::string gen_config_json(const GenConfig& c) { return gen_config_object(c).dump(); }

GenConfig gen_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    GenConfig c;
    c.task = parse_task(j.at("task").get<std::string>());
    c.pair_type = parse_pair_type(j.at("pair_type").get<std::string>());
    c.per_class = j.at("per_class").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    return c;
}

void write_dataset(std::ostream& out, const LabeledPairSet& set) {
    const std::string cfg = gen_config_json(set.config);
    const json header{{"format", "polyenc-pairs"},
                      {"version", 1},
                      {"config", json::parse(cfg)},
                      {"config_hash", hex64(fnv1a(cfg.data(), cfg.size()))}};
    out << header.dump() << '\n';
    for (const PairSample& s : set.pairs) {
        json rec{{"a", json::parse(to_geojson(s.a))}, {"b", json::parse(to_geojson(s.b))}, {"split", split_name(s.split)}};
        if (s.topo) rec["topo"] = *s.topo;
        if (s.dir) rec["dir"] = *s.dir;
        if (s.dist) rec["dist"] = *s.dist;
        out << rec.dump() << '\n';
    }
}

LabeledPairSet read_dataset(std::istream& in) {
    LabeledPairSet set;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError("dataset line " + std::to_string(lineno) + ": " + what);
    };
    if (!std::getline(in, line)) throw ParseError("dataset is empty");
    ++lineno;
    try {
        const json header = json::parse(line);
        if (header.at("format") != "polyenc-pairs") throw fail("not a pair dataset");
        set.config = gen_config_from_json(header.at("config").dump());
    } catch (const json::exception& e) {
        throw fail(e.what());
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const json rec = json::parse(line);
            PairSample s{parse_geometry(rec.at("a").dump(), TextFormat::GeoJSON),
                         parse_geometry(rec.at("b").dump(), TextFormat::GeoJSON),
                         std::nullopt,
                         std::nullopt,
                         std::nullopt,
                         parse_split(rec.at("split").get<std::string>())};
            if (rec.contains("topo")) s.topo = rec["topo"].get<int>();
            if (rec.contains("dir")) s.dir = rec["dir"].get<int>();
            if (rec.contains("dist")) s.dist = rec["dist"].get<double>();
            set.pairs.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw fail(e.what());
        } catch (const Error& e) {
            throw fail(e.what());
        }
    }
    return set;
}

}  // namespace polyenc
