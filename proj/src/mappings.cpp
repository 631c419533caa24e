#include "mvfix/mappings.hpp"

#include <algorithm>
#include <string>

namespace mvfix {

SingleMap::SingleMap(std::vector<Index> target) : target_(std::move(target))
{
    if (target_.empty()) {
        throw MapError("map must act on at least one point");
    }
    for (std::size_t i = 0; i < target_.size(); ++i) {
        if (target_[i] >= target_.size()) {
            throw MapError("target of point " + std::to_string(i) + " is out of range");
        }
    }
}

MultiMap::MultiMap(std::vector<PointSet> targets) : targets_(std::move(targets))
{
    if (targets_.empty()) {
        throw MapError("map must act on at least one point");
    }
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (!targets_[i].valid_in(targets_.size())) {
            throw MapError("image of point " + std::to_string(i) + " contains an out-of-range index");
        }
    }
}

bool MultiMap::single_valued() const
{
    return std::all_of(targets_.begin(), targets_.end(), [](const PointSet& s) { return s.size() == 1; });
}

MultiMap lift_single(const SingleMap& m)
{
    std::vector<PointSet> targets;
    targets.reserve(m.size());
    for (Index x = 0; x < m.size(); ++x) {
        targets.push_back(PointSet::singleton(m(x)));
    }
    return MultiMap(std::move(targets));
}

std::optional<SingleMap> as_single(const MultiMap& t)
{
    if (!t.single_valued()) {
        return std::nullopt;
    }
    std::vector<Index> target;
    target.reserve(t.size());
    for (const auto& s : t.targets()) {
        target.push_back(s.front());
    }
    return SingleMap(std::move(target));
}

PointSet image(const MultiMap& t, const PointSet& a)
{
    std::vector<Index> out;
    for (Index x : a) {
        const auto& tx = t(x);
        out.insert(out.end(), tx.begin(), tx.end());
    }
    return PointSet(std::move(out));
}

PointSet power_image(const MultiMap& t, Index x, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("power_image needs k >= 1");
    }
    PointSet current = t(x);
    for (std::size_t step = 1; step < k; ++step) {
        current = image(t, current);
    }
    return current;
}

std::vector<Index> fixed_points(const MultiMap& t)
{
    std::vector<Index> out;
    for (Index x = 0; x < t.size(); ++x) {
        if (t(x).contains(x)) {
            out.push_back(x);
        }
    }
    return out;
}

std::vector<Index> periodic_points(const MultiMap& t, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("period must be at least 1");
    }
    std::vector<Index> out;
    for (Index x = 0; x < t.size(); ++x) {
        PointSet current = t(x);
        std::size_t first_return = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            if (j > 1) {
                current = image(t, current);
            }
            if (current.contains(x)) {
                first_return = j;
                break;
            }
        }
        if (first_return == k) {
            out.push_back(x);
        }
    }
    return out;
}

} // namespace mvfix
