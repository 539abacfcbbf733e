#include "polyenc/frequency_grid.hpp"

#include <cmath>

#include "polyenc/io.hpp"

namespace polyenc {

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

FrequencyGrid::FrequencyGrid(std::vector<Frequency> samples, double f_min, double f_max, int per_axis)
    : samples_(std::move(samples)), f_min_(f_min), f_max_(f_max), per_axis_(per_axis) {
    id_ = fnv1a(samples_.data(), samples_.size() * sizeof(Frequency));
}

std::string FrequencyGrid::to_csv() const {
    std::string out = "u,v\n";
    for (const Frequency& f : samples_) out += format_double(f.u) + "," + format_double(f.v) + "\n";
    return out;
}

std::vector<double> geometric_frequencies(double f_min, double f_max, int count) {
    if (!(f_min > 0.0) || !(f_max > f_min) || !std::isfinite(f_max)) {
        throw InvalidRange("need 0 < f_min < f_max");
    }
    if (count < 2) throw TooFew("need at least 2 frequencies per axis");
    const double ratio = std::pow(f_max / f_min, 1.0 / (count - 1));
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f_min * std::pow(ratio, i);
    out.front() = f_min;
    out.back() = f_max;
    return out;
}

FrequencyGrid build_grid(const std::vector<double>& freqs, GridMode mode) {
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!(freqs[i] > 0.0) || (i > 0 && !(freqs[i] > freqs[i - 1]))) {
            throw InvalidRange("frequencies must be positive and strictly increasing");
        }
    }
    if (freqs.empty()) throw TooFew("no frequencies");
    std::vector<double> signed_set;
    for (auto it = freqs.rbegin(); it != freqs.rend(); ++it) signed_set.push_back(-*it);
    signed_set.push_back(0.0);
    signed_set.insert(signed_set.end(), freqs.begin(), freqs.end());

    const std::vector<double>& us = mode == GridMode::HalfPlane ? freqs : signed_set;
    std::vector<Frequency> samples;
    samples.reserve(us.size() * signed_set.size());
    for (double u : us) {
        for (double v : signed_set) samples.push_back({u, v});
    }
    return FrequencyGrid(std::move(samples), freqs.front(), freqs.back(), static_cast<int>(freqs.size()));
}

FrequencyGrid default_grid() { return build_grid(geometric_frequencies(0.1, 1.0, 10)); }

}  // namespace polyenc
