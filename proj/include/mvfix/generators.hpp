#pragma once

// Seeded instance generators. Every function is a pure function of its
// arguments, so equal seeds give equal outputs.

#include "mvfix/instance.hpp"
#include "mvfix/mappings.hpp"
#include "mvfix/metric_space.hpp"

#include <cstdint>

namespace mvfix {

struct SpaceFlavor {
    enum class Kind { euclidean, closure_random, line };
    Kind kind = Kind::euclidean;
    std::size_t dim = 2;  ///< euclidean only

    friend bool operator==(const SpaceFlavor&, const SpaceFlavor&) = default;
};

struct MapFlavor {
    enum class Kind { uniform_random, hub, single_random, cycle };
    Kind kind = Kind::uniform_random;
    std::size_t max_image = 1;  ///< uniform_random
    Index hub_index = 0;        ///< hub
    std::size_t spread = 0;     ///< hub
    std::size_t length = 2;     ///< cycle

    friend bool operator==(const MapFlavor&, const MapFlavor&) = default;
};

struct GenConfig {
    std::size_t point_count = 4;
    /// When nonzero, each instance draws its size uniformly from [point_count, point_count_max].
    std::size_t point_count_max = 0;
    SpaceFlavor flavor;
    MapFlavor map_flavor;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void check() const;

    friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

std::string_view to_string(SpaceFlavor::Kind kind);
std::string_view to_string(MapFlavor::Kind kind);

/// Mixes a base seed with an index into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// n points uniform in the unit cube of dimension dim, Euclidean distances.
MetricSpaceD random_euclidean_space(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Shortest-path closure of a symmetric matrix with weights drawn from [0.1, 1].
MetricSpaceD random_metric_space(std::size_t n, std::uint64_t seed);

/// Points 0, 1, ..., n-1 on the real line.
MetricSpaceD line_space(std::size_t n);

/// All-pairs shortest paths over a symmetric nonnegative weight matrix.
Eigen::MatrixXd shortest_path_closure(Eigen::MatrixXd weights);

/// Each point gets a uniformly sized (1..max_image) subset of uniformly chosen points.
MultiMap random_multimap(const MetricSpaceD& space, std::size_t max_image, std::uint64_t seed);

/// Each point maps to a uniformly chosen nonempty subset of the spread + 1
/// points nearest the hub (ties by index). spread = 0 is the constant map.
MultiMap hub_map(const MetricSpaceD& space, Index hub, std::size_t spread, std::uint64_t seed);

SingleMap random_single_map(std::size_t n, std::uint64_t seed);

/// i -> i + 1 (mod length) on the first `length` points; the rest map to 0.
SingleMap cycle_map(std::size_t n, std::size_t length);

/// Instance for the config as written (its own seed).
Instance generate(const GenConfig& config);

/// The index-th instance of a sweep: the config with seed derived from (config.seed, index).
Instance generate(const GenConfig& config, std::uint64_t index);

} // namespace mvfix
