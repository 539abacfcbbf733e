#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyenc/geometry.hpp"

namespace polyenc {

class InvalidRange : public Error {
public:
    using Error::Error;
};

class TooFew : public Error {
public:
    using Error::Error;
};

struct Frequency {
    double u = 0.0;  ///< cycles per unit along x
    double v = 0.0;  ///< cycles per unit along y
    friend bool operator==(const Frequency&, const Frequency&) = default;
};

enum class GridMode {
    HalfPlane,  ///< u in {f_i}, v in {-f_i} U {0} U {f_i}; W * (2W + 1) samples
    Full,       ///< u and v both in {-f_i} U {0} U {f_i}; diagnostics only
};

/// Immutable set of frequency samples at which spectra are evaluated.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    FrequencyGrid(std::vector<Frequency> samples, double f_min, double f_max, int per_axis);

    const std::vector<Frequency>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const Frequency& operator[](std::size_t i) const { return samples_[i]; }

    double f_min() const { return f_min_; }
    double f_max() const { return f_max_; }
    int per_axis() const { return per_axis_; }

    /// FNV-1a hash of the sample bytes in order; identifies the grid a
    /// spectrum was evaluated on.
    std::uint64_t id() const { return id_; }

    /// "u,v" per row with a header line.
    std::string to_csv() const;

private:
    std::vector<Frequency> samples_;
    double f_min_ = 0.0;
    double f_max_ = 0.0;
    int per_axis_ = 0;
    std::uint64_t id_ = 0;
};

/// f_i = f_min * ratio^i, i = 0..count-1, ratio = (f_max / f_min)^(1 / (count - 1)).
/// The last element is set to exactly f_max.
std::vector<double> geometric_frequencies(double f_min, double f_max, int count);

/// Meshgrid over the signed frequency set. HalfPlane keeps exactly one of
/// every (f, -f) pair and drops the u = 0 column.
/// Row-major with u as the outer loop.
FrequencyGrid build_grid(const std::vector<double>& freqs, GridMode mode = GridMode::HalfPlane);

/// Default grid: f_min 0.1, f_max 1.0, 10 per axis, 210 samples.
FrequencyGrid default_grid();

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 1469598103934665603ull);

}  // namespace polyenc
