#pragma once

// Single- and multivalued self-maps of a finite space, with set images,
// iterates, and fixed/periodic point queries.

#include "mvfix/metric_space.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace mvfix {

class MapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// T : X -> X on points {0, ..., size()-1}.
class SingleMap {
public:
    explicit SingleMap(std::vector<Index> target);

    std::size_t size() const { return target_.size(); }
    Index operator()(Index x) const { return target_.at(x); }
    const std::vector<Index>& targets() const { return target_; }

    friend bool operator==(const SingleMap&, const SingleMap&) = default;

private:
    std::vector<Index> target_;
};

/// T : X -> CB(X); on a finite space CB(X) is every nonempty subset.
class MultiMap {
public:
    explicit MultiMap(std::vector<PointSet> targets);

    std::size_t size() const { return targets_.size(); }
    const PointSet& operator()(Index x) const { return targets_.at(x); }
    const std::vector<PointSet>& targets() const { return targets_; }

    bool single_valued() const;

    friend bool operator==(const MultiMap&, const MultiMap&) = default;

private:
    std::vector<PointSet> targets_;
};

MultiMap lift_single(const SingleMap& m);

/// The single-valued map behind T when every image is a singleton.
std::optional<SingleMap> as_single(const MultiMap& t);

/// Union of T(a) over a in A.
PointSet image(const MultiMap& t, const PointSet& a);

/// T^k x as an iterated set image: T^1 x = T(x), T^k x = image(T, T^{k-1} x).
PointSet power_image(const MultiMap& t, Index x, std::size_t k);

/// Points with x in T(x), ascending.
std::vector<Index> fixed_points(const MultiMap& t);

/// Points of prime period exactly k: x in T^k x and x not in T^j x for j < k.
std::vector<Index> periodic_points(const MultiMap& t, std::size_t k);

/// Throws std::invalid_argument unless the map acts on a space of this size.
template <typename Scalar>
void require_same_size(const MetricSpace<Scalar>& space, const MultiMap& t)
{
    if (space.size() != t.size()) {
        throw std::invalid_argument("map has " + std::to_string(t.size()) + " points but space has " +
                                    std::to_string(space.size()));
    }
}

} // namespace mvfix
