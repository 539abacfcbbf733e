#include "polyenc/io.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

#include "json.hpp"

namespace polyenc {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("cannot format number");
    return std::string(buf, end);
}

namespace {

class WktReader {
public:
    explicit WktReader(std::string_view text) : text_(text) {}

    Geometry read() {
        const std::string tag = word();
        if (tag.empty()) throw ParseError("expected a WKT geometry tag");
        if (peek_word() == "Z" || peek_word() == "M" || peek_word() == "ZM") {
            throw UnsupportedGeometry("only 2D coordinates are supported");
        }
        if (peek_word() == "EMPTY") throw ValidationError("empty geometry");
        Geometry g;
        if (tag == "POINT") {
            expect('(');
            const Point2 p = point();
            expect(')');
            g = Geometry(p);
        } else if (tag == "LINESTRING") {
            g = Geometry(Polyline{sequence()});
        } else if (tag == "POLYGON") {
            g = Geometry(polygon());
        } else if (tag == "MULTIPOLYGON") {
            MultiPolygon mp;
            expect('(');
            do {
                mp.polygons.push_back(polygon());
            } while (accept(','));
            expect(')');
            g = Geometry(std::move(mp));
        } else if (tag == "GEOMETRYCOLLECTION" || tag == "MULTIPOINT" || tag == "MULTILINESTRING" ||
                   tag == "TRIANGLE" || tag == "TIN" || tag == "POLYHEDRALSURFACE" || tag == "CIRCULARSTRING") {
            throw UnsupportedGeometry("unsupported geometry type " + tag);
        } else {
            throw ParseError("unknown WKT tag '" + tag + "'");
        }
        skip_space();
        if (pos_ != text_.size()) throw ParseError("trailing characters after geometry");
        return g;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string word() {
        skip_space();
        std::string out;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_]))));
            ++pos_;
        }
        return out;
    }

    std::string peek_word() {
        const std::size_t saved = pos_;
        std::string w = word();
        pos_ = saved;
        return w;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(pos_));
        }
    }

    double number() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '+') start = ++pos_;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + text_.size(), value);
        if (ec != std::errc()) throw ParseError("expected a number at offset " + std::to_string(start));
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    Point2 point() {
        const double x = number();
        const double y = number();
        skip_space();
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
            throw UnsupportedGeometry("only 2D coordinates are supported");
        }
        return {x, y};
    }

    std::vector<Point2> sequence() {
        std::vector<Point2> pts;
        expect('(');
        do {
            pts.push_back(point());
        } while (accept(','));
        expect(')');
        return pts;
    }

    Polygon polygon() {
        Polygon pg;
        expect('(');
        pg.exterior = sequence();
        while (accept(',')) pg.holes.push_back(sequence());
        expect(')');
        return pg;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

using nlohmann::json;

Point2 json_point(const json& j) {
    if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("coordinate must be an array of two numbers");
    }
    if (j.size() > 2) throw UnsupportedGeometry("only 2D coordinates are supported");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> json_points(const json& j) {
    if (!j.is_array()) throw ParseError("expected a coordinate array");
    std::vector<Point2> pts;
    for (const json& c : j) pts.push_back(json_point(c));
    return pts;
}

Polygon json_polygon(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("polygon needs at least one ring");
    Polygon pg;
    pg.exterior = json_points(j[0]);
    for (std::size_t i = 1; i < j.size(); ++i) pg.holes.push_back(json_points(j[i]));
    return pg;
}

json to_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const Point2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

json to_json(const Polygon& pg) {
    json rings = json::array();
    rings.push_back(to_json(pg.exterior));
    for (const Ring& h : pg.holes) rings.push_back(to_json(h));
    return rings;
}

Geometry read_geojson(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed GeoJSON: ") + e.what());
    }
    if (j.is_object() && j.value("type", "") == "Feature") {
        if (!j.contains("geometry")) throw ParseError("feature without geometry");
        j = j["geometry"];
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ParseError("GeoJSON geometry needs a string 'type'");
    }
    const std::string type = j["type"];
    if (type == "GeometryCollection" || type == "MultiPoint" || type == "MultiLineString" ||
        type == "FeatureCollection") {
        throw UnsupportedGeometry("unsupported geometry type " + type);
    }
    if (!j.contains("coordinates")) throw ParseError("GeoJSON geometry needs 'coordinates'");
    const json& c = j["coordinates"];
    if (type == "Point") return Geometry(json_point(c));
    if (type == "LineString") return Geometry(Polyline{json_points(c)});
    if (type == "Polygon") return Geometry(json_polygon(c));
    if (type == "MultiPolygon") {
        if (!c.is_array()) throw ParseError("expected an array of polygons");
        MultiPolygon mp;
        for (const json& p : c) mp.polygons.push_back(json_polygon(p));
        return Geometry(std::move(mp));
    }
    throw ParseError("unknown GeoJSON type '" + type + "'");
}

std::string wkt_points(const std::vector<Point2>& pts) {
    std::string out = "(";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ", ";
        out += format_double(pts[i].x) + " " + format_double(pts[i].y);
    }
    return out + ")";
}

std::string wkt_polygon(const Polygon& pg) {
    std::string out = "(" + wkt_points(pg.exterior);
    for (const Ring& h : pg.holes) out += ", " + wkt_points(h);
    return out + ")";
}

}  // namespace

Geometry parse_geometry(std::string_view text, TextFormat format) {
    Geometry g = format == TextFormat::WKT ? WktReader(text).read() : read_geojson(text);
    return validate(std::move(g));
}

Geometry parse_geometry(std::string_view text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return parse_geometry(text, c == '{' ? TextFormat::GeoJSON : TextFormat::WKT);
    }
    throw ParseError("empty input");
}

std::string to_wkt(const Geometry& g) {
    switch (g.kind()) {
        case GeometryKind::Point:
            return "POINT (" + format_double(g.point().x) + " " + format_double(g.point().y) + ")";
        case GeometryKind::Polyline: return "LINESTRING " + wkt_points(g.polyline().vertices);
        case GeometryKind::Polygon: return "POLYGON " + wkt_polygon(g.polygon());
        case GeometryKind::MultiPolygon: {
            std::string out = "MULTIPOLYGON (";
            const auto& parts = g.multipolygon().polygons;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) out += ", ";
                out += wkt_polygon(parts[i]);
            }
            return out + ")";
        }
    }
    return {};
}

std::string to_geojson(const Geometry& g) {
    json j;
    j["type"] = std::string(kind_name(g.kind()));
    switch (g.kind()) {
        case GeometryKind::Point: j["coordinates"] = {g.point().x, g.point().y}; break;
        case GeometryKind::Polyline: j["coordinates"] = to_json(g.polyline().vertices); break;
        case GeometryKind::Polygon: j["coordinates"] = to_json(g.polygon()); break;
        case GeometryKind::MultiPolygon: {
            json parts = json::array();
            for (const Polygon& p : g.multipolygon().polygons) parts.push_back(to_json(p));
            j["coordinates"] = parts;
            break;
        }
    }
    return j.dump();
}

}  // namespace polyenc
