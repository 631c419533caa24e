#pragma once

#include "mvfix/mappings.hpp"
#include "mvfix/metric_space.hpp"

#include <map>
#include <string>

namespace mvfix {

/// A space together with a self-map of it.
struct Instance {
    enum class MapKind { single, multi };

    MetricSpaceD space;
    MultiMap map;
    MapKind kind = MapKind::multi;
    std::map<std::string, std::string> metadata;

    friend bool operator==(const Instance&, const Instance&) = default;
};

} // namespace mvfix
