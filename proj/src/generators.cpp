#include "mvfix/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace mvfix {

std::string_view to_string(SpaceFlavor::Kind kind)
{
    switch (kind) {
    case SpaceFlavor::Kind::euclidean: return "euclidean";
    case SpaceFlavor::Kind::closure_random: return "closure_random";
    case SpaceFlavor::Kind::line: return "line";
    }
    return "unknown";
}

std::string_view to_string(MapFlavor::Kind kind)
{
    switch (kind) {
    case MapFlavor::Kind::uniform_random: return "uniform_random";
    case MapFlavor::Kind::hub: return "hub";
    case MapFlavor::Kind::single_random: return "single_random";
    case MapFlavor::Kind::cycle: return "cycle";
    }
    return "unknown";
}

void GenConfig::check() const
{
    if (point_count < 2) {
        throw std::invalid_argument("point_count must be at least 2");
    }
    if (point_count_max != 0 && point_count_max < point_count) {
        throw std::invalid_argument("point_count_max must be 0 or at least point_count");
    }
    if (flavor.kind == SpaceFlavor::Kind::euclidean && flavor.dim < 1) {
        throw std::invalid_argument("euclidean dimension must be at least 1");
    }
    switch (map_flavor.kind) {
    case MapFlavor::Kind::uniform_random:
        if (map_flavor.max_image < 1) {
            throw std::invalid_argument("max_image must be at least 1");
        }
        break;
    case MapFlavor::Kind::hub:
        if (map_flavor.hub_index >= point_count) {
            throw std::invalid_argument("hub_index must be below point_count");
        }
        break;
    case MapFlavor::Kind::cycle:
        if (map_flavor.length < 1 || map_flavor.length > point_count) {
            throw std::invalid_argument("cycle length must lie in [1, point_count]");
        }
        break;
    case MapFlavor::Kind::single_random:
        break;
    }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

MetricSpaceD random_euclidean_space(std::size_t n, std::size_t dim, std::uint64_t seed)
{
    if (n < 1 || dim < 1) {
        throw std::invalid_argument("euclidean space needs n >= 1 and dim >= 1");
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto count = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(dim), count);
    for (Eigen::Index j = 0; j < count; ++j) {
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            pts(i, j) = unit(gen);
        }
    }
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = i + 1; j < count; ++j) {
            dist(i, j) = (pts.col(i) - pts.col(j)).norm();
            dist(j, i) = dist(i, j);
        }
    }
    return validate_metric(std::move(dist));
}

Eigen::MatrixXd shortest_path_closure(Eigen::MatrixXd weights)
{
    const auto n = weights.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                weights(i, j) = std::min(weights(i, j), weights(i, k) + weights(k, j));
            }
        }
    }
    // Path sums taken in different orders can differ in the last ulp.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            weights(i, j) = weights(j, i) = std::min(weights(i, j), weights(j, i));
        }
    }
    return weights;
}

MetricSpaceD random_metric_space(std::size_t n, std::uint64_t seed)
{
    if (n < 2) {
        throw std::invalid_argument("random metric space needs n >= 2");
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    const auto count = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = i + 1; j < count; ++j) {
            raw(i, j) = raw(j, i) = weight(gen);
        }
    }
    return validate_metric(shortest_path_closure(std::move(raw)));
}

MetricSpaceD line_space(std::size_t n)
{
    const auto count = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd dist(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < count; ++j) {
            dist(i, j) = static_cast<double>(std::abs(i - j));
        }
    }
    return validate_metric(std::move(dist));
}

MultiMap random_multimap(const MetricSpaceD& space, std::size_t max_image, std::uint64_t seed)
{
    if (max_image < 1) {
        throw std::invalid_argument("max_image must be at least 1");
    }
    const std::size_t n = space.size();
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> size_dist(1, std::min(max_image, n));
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), Index{0});
    std::vector<PointSet> targets;
    targets.reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<Index> members;
        std::sample(all.begin(), all.end(), std::back_inserter(members), size_dist(gen), gen);
        targets.emplace_back(std::move(members));
    }
    return MultiMap(std::move(targets));
}

MultiMap hub_map(const MetricSpaceD& space, Index hub, std::size_t spread, std::uint64_t seed)
{
    const std::size_t n = space.size();
    if (hub >= n) {
        throw std::invalid_argument("hub index outside space");
    }
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return space(hub, a) < space(hub, b); });
    order.resize(std::min(spread + 1, n));

    std::mt19937_64 gen(seed);
    std::vector<PointSet> targets;
    targets.reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
        // Rejection over independent coin flips is uniform on nonempty subsets.
        std::vector<Index> members;
        while (members.empty()) {
            for (Index candidate : order) {
                if (gen() >> 63) {
                    members.push_back(candidate);
                }
            }
        }
        targets.emplace_back(std::move(members));
    }
    return MultiMap(std::move(targets));
}

SingleMap random_single_map(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> target(n);
    for (auto& t : target) {
        t = pick(gen);
    }
    return SingleMap(std::move(target));
}

SingleMap cycle_map(std::size_t n, std::size_t length)
{
    if (length < 1 || length > n) {
        throw std::invalid_argument("cycle length must lie in [1, n]");
    }
    std::vector<Index> target(n, 0);
    for (std::size_t i = 0; i < length; ++i) {
        target[i] = (i + 1) % length;
    }
    return SingleMap(std::move(target));
}

Instance generate(const GenConfig& config)
{
    config.check();
    std::mt19937_64 gen(config.seed);
    std::size_t n = config.point_count;
    if (config.point_count_max > config.point_count) {
        n = std::uniform_int_distribution<std::size_t>(config.point_count, config.point_count_max)(gen);
    }
    const std::uint64_t space_seed = derive_seed(config.seed, 1);
    const std::uint64_t map_seed = derive_seed(config.seed, 2);

    auto space = [&] {
        switch (config.flavor.kind) {
        case SpaceFlavor::Kind::euclidean: return random_euclidean_space(n, config.flavor.dim, space_seed);
        case SpaceFlavor::Kind::closure_random: return random_metric_space(n, space_seed);
        case SpaceFlavor::Kind::line: return line_space(n);
        }
        throw std::invalid_argument("unknown space flavor");
    }();

    const auto& mf = config.map_flavor;
    switch (mf.kind) {
    case MapFlavor::Kind::uniform_random:
        return {space, random_multimap(space, mf.max_image, map_seed), Instance::MapKind::multi, {}};
    case MapFlavor::Kind::hub:
        return {space, hub_map(space, mf.hub_index, mf.spread, map_seed), Instance::MapKind::multi, {}};
    case MapFlavor::Kind::single_random:
        return {space, lift_single(random_single_map(n, map_seed)), Instance::MapKind::single, {}};
    case MapFlavor::Kind::cycle:
        return {space, lift_single(cycle_map(n, mf.length)), Instance::MapKind::single, {}};
    }
    throw std::invalid_argument("unknown map flavor");
}

Instance generate(const GenConfig& config, std::uint64_t index)
{
    GenConfig derived = config;
    derived.seed = derive_seed(config.seed, index);
    return generate(derived);
}

} // namespace mvfix
