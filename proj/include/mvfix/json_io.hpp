#pragma once

// JSON encodings for every file and report the tools exchange.
//
// Malformed documents (bad syntax, wrong types, missing keys) raise
// ParseError. Well-formed documents that describe an invalid object raise
// the owning module's error (MetricError, MapError).

#include "mvfix/certification.hpp"
#include "mvfix/generators.hpp"
#include "mvfix/instance.hpp"
#include "mvfix/iteration.hpp"
#include "mvfix/oracle.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>

namespace mvfix::io {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& doc);

json to_json(const MetricSpaceD& space);
MetricSpaceD space_from_json(const json& doc, double slack = kDefaultSlack);

json to_json(const PointSet& set);
json to_json(const MultiMap& map);
json to_json(const SingleMap& map);
MultiMap multimap_from_json(const json& doc);
SingleMap singlemap_from_json(const json& doc);

json to_json(const Instance& instance);
Instance instance_from_json(const json& doc, double slack = kDefaultSlack);

json to_json(const Certificate& cert);
Certificate certificate_from_json(const json& doc);

json to_json(const SelectionPolicy& policy);
SelectionPolicy policy_from_json(const json& doc);
json to_json(const OrbitTrace& trace);
OrbitTrace trace_from_json(const json& doc);

json to_json(const GenConfig& config);
GenConfig genconfig_from_json(const json& doc);

json to_json(const ValidationReport& report);
ValidationReport report_from_json(const json& doc);

json to_json(const SweepSummary& summary);
SweepSummary summary_from_json(const json& doc);

} // namespace mvfix::io
