#include "mvfix/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mvfix::io {

namespace {

constexpr std::string_view kInfinity = "infinity";
constexpr std::string_view kUndefined = "undefined-empty-domain";

/// Runs a decoder, turning nlohmann's type/key errors into ParseError.
template <typename Fn>
auto decode(std::string_view what, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ParseError("malformed " + std::string(what) + ": " + e.what());
    }
}

Index index_from_json(const json& v, std::string_view what)
{
    if (!v.is_number_integer()) {
        throw ParseError(std::string(what) + " must be an integer index");
    }
    if (!v.is_number_unsigned()) {
        throw MapError(std::string(what) + " is negative");
    }
    return v.get<Index>();
}

std::vector<Index> indices_from_json(const json& v, std::string_view what)
{
    if (!v.is_array()) {
        throw ParseError(std::string(what) + " must be an array");
    }
    std::vector<Index> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        out.push_back(index_from_json(e, what));
    }
    return out;
}

PointSet canonical_set(std::vector<Index> members, std::size_t position)
{
    if (!PointSet::is_canonical(members)) {
        throw MapError("image of point " + std::to_string(position) +
                       " must be a nonempty, strictly increasing index list");
    }
    return PointSet(std::move(members));
}

json optional_real(const std::optional<double>& v)
{
    if (!v) {
        return std::string(kUndefined);
    }
    if (std::isinf(*v)) {
        return std::string(kInfinity);
    }
    return *v;
}

std::optional<double> optional_real_from_json(const json& v)
{
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == kInfinity) {
            return std::numeric_limits<double>::infinity();
        }
        if (s == kUndefined) {
            return std::nullopt;
        }
        throw ParseError("unexpected tightest value '" + s + "'");
    }
    return v.get<double>();
}

} // namespace

json read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const json& doc)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

// --- metric spaces and maps ------------------------------------------------

json to_json(const MetricSpaceD& space)
{
    json dist = json::array();
    for (Index i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (Index j = 0; j < space.size(); ++j) {
            row.push_back(space(i, j));
        }
        dist.push_back(std::move(row));
    }
    return {{"labels", space.labels()}, {"dist", std::move(dist)}};
}

MetricSpaceD space_from_json(const json& doc, double slack)
{
    auto [matrix, labels] = decode("metric space", [&] {
        const auto& rows = doc.at("dist");
        if (!rows.is_array() || rows.empty()) {
            throw ParseError("dist must be a nonempty array of rows");
        }
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw ShapeError("dist row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
            }
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto& v = row[static_cast<std::size_t>(j)];
                if (!v.is_number()) {
                    throw ParseError("dist entries must be numbers");
                }
                m(i, j) = v.get<double>();
            }
        }
        std::vector<std::string> labels;
        if (doc.contains("labels")) {
            labels = doc.at("labels").get<std::vector<std::string>>();
        }
        return std::make_pair(std::move(m), std::move(labels));
    });
    return validate_metric(std::move(matrix), std::move(labels), slack);
}

json to_json(const PointSet& set)
{
    return json(std::vector<Index>(set.begin(), set.end()));
}

json to_json(const MultiMap& map)
{
    json targets = json::array();
    for (const auto& s : map.targets()) {
        targets.push_back(to_json(s));
    }
    return {{"targets", std::move(targets)}};
}

json to_json(const SingleMap& map)
{
    return {{"target", map.targets()}};
}

MultiMap multimap_from_json(const json& doc)
{
    return decode("multivalued map", [&] {
        const auto& rows = doc.at("targets");
        if (!rows.is_array()) {
            throw ParseError("targets must be an array");
        }
        std::vector<PointSet> targets;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            targets.push_back(canonical_set(indices_from_json(rows[i], "image member"), i));
        }
        return MultiMap(std::move(targets));
    });
}

SingleMap singlemap_from_json(const json& doc)
{
    return decode("single-valued map", [&] { return SingleMap(indices_from_json(doc.at("target"), "target")); });
}

json to_json(const Instance& instance)
{
    json map;
    if (instance.kind == Instance::MapKind::single) {
        map = to_json(*as_single(instance.map));
    } else {
        map = to_json(instance.map);
    }
    return {{"space", to_json(instance.space)}, {"map", std::move(map)}, {"metadata", instance.metadata}};
}

Instance instance_from_json(const json& doc, double slack)
{
    if (!doc.is_object()) {
        throw ParseError("instance must be a JSON object");
    }
    auto space = decode("instance", [&] { return space_from_json(doc.at("space"), slack); });
    const json& map_doc = decode("instance", [&]() -> const json& { return doc.at("map"); });
    if (!map_doc.is_object()) {
        throw ParseError("map must be a JSON object");
    }
    const bool has_single = map_doc.contains("target");
    const bool has_multi = map_doc.contains("targets");
    if (has_single == has_multi) {
        throw ParseError("map needs exactly one of 'target' or 'targets'");
    }
    Instance::MapKind kind = has_single ? Instance::MapKind::single : Instance::MapKind::multi;
    if (map_doc.contains("kind")) {
        const auto declared = decode("map", [&] { return map_doc.at("kind").get<std::string>(); });
        const bool matches = (declared == "single" && has_single) || (declared == "multi" && has_multi);
        if (!matches) {
            throw MapError("map kind '" + declared + "' does not match its encoding");
        }
    }
    MultiMap map = has_single ? lift_single(singlemap_from_json(map_doc)) : multimap_from_json(map_doc);
    if (map.size() != space.size()) {
        throw MapError("map covers " + std::to_string(map.size()) + " points but the space has " +
                       std::to_string(space.size()));
    }
    std::map<std::string, std::string> metadata;
    if (doc.contains("metadata")) {
        metadata = decode("metadata", [&] { return doc.at("metadata").get<std::map<std::string, std::string>>(); });
    }
    return Instance{std::move(space), std::move(map), kind, std::move(metadata)};
}

// --- certificates ----------------------------------------------------------

json to_json(const Certificate& cert)
{
    json doc = {
        {"class", to_string(cert.klass)},
        {"n", cert.arity},
        {"tightest", optional_real(cert.tightest)},
        {"admissible_sup", cert.admissible_sup},
        {"strict_positive_lower", cert.strict_positive_lower},
        {"certified", cert.certified},
        {"witness", cert.witness.empty() ? json(nullptr) : json(cert.witness)},
        {"tuples_examined", cert.tuples_examined},
        {"skipped_zero_zero", cert.skipped_zero_zero},
        {"domain_empty", cert.domain_empty},
        {"below_cardinality_bound", cert.below_cardinality_bound},
    };
    if (cert.distinct != 0) {
        doc["distinct"] = cert.distinct;
    }
    if (cert.chatterjea_domain) {
        doc["chatterjea_domain"] = to_string(*cert.chatterjea_domain);
    }
    return doc;
}

Certificate certificate_from_json(const json& doc)
{
    return decode("certificate", [&] {
        Certificate c;
        c.klass = parse_contraction_class(doc.at("class").get<std::string>());
        c.arity = doc.at("n").get<std::size_t>();
        c.distinct = doc.value("distinct", std::size_t{0});
        c.tightest = optional_real_from_json(doc.at("tightest"));
        c.admissible_sup = doc.at("admissible_sup").get<double>();
        c.strict_positive_lower = doc.at("strict_positive_lower").get<bool>();
        c.certified = doc.at("certified").get<bool>();
        if (!doc.at("witness").is_null()) {
            c.witness = doc.at("witness").get<std::vector<Index>>();
        }
        c.tuples_examined = doc.at("tuples_examined").get<std::uint64_t>();
        c.skipped_zero_zero = doc.at("skipped_zero_zero").get<std::uint64_t>();
        c.domain_empty = doc.at("domain_empty").get<bool>();
        c.below_cardinality_bound = doc.at("below_cardinality_bound").get<bool>();
        if (doc.contains("chatterjea_domain")) {
            c.chatterjea_domain = parse_chatterjea_domain(doc.at("chatterjea_domain").get<std::string>());
        }
        return c;
    });
}

// --- traces ----------------------------------------------------------------

json to_json(const SelectionPolicy& policy)
{
    json doc = {{"kind", to_string(policy.kind)}};
    if (policy.kind == SelectionPolicy::Kind::seeded_random) {
        doc["seed"] = policy.seed;
    }
    return doc;
}

SelectionPolicy policy_from_json(const json& doc)
{
    return decode("selection policy", [&] {
        SelectionPolicy p;
        p.kind = parse_policy_kind(doc.at("kind").get<std::string>());
        if (p.kind == SelectionPolicy::Kind::seeded_random) {
            p.seed = doc.at("seed").get<std::uint64_t>();
        }
        return p;
    });
}

json to_json(const OrbitTrace& trace)
{
    json outcome = {{"kind", to_string(trace.outcome.kind)}};
    switch (trace.outcome.kind) {
    case Outcome::Kind::fixed_point: outcome["point"] = trace.outcome.point; break;
    case Outcome::Kind::cycle:
        outcome["start"] = trace.outcome.start;
        outcome["length"] = trace.outcome.length;
        break;
    case Outcome::Kind::step_limit: break;
    }
    return {{"points", trace.points},
            {"step_dists", trace.step_dists},
            {"outcome", std::move(outcome)},
            {"steps_taken", trace.steps_taken},
            {"policy", to_json(trace.policy)}};
}

OrbitTrace trace_from_json(const json& doc)
{
    return decode("orbit trace", [&] {
        OrbitTrace t;
        t.points = doc.at("points").get<std::vector<Index>>();
        t.step_dists = doc.at("step_dists").get<std::vector<double>>();
        t.steps_taken = doc.at("steps_taken").get<std::size_t>();
        t.policy = policy_from_json(doc.at("policy"));
        const auto& o = doc.at("outcome");
        const auto kind = o.at("kind").get<std::string>();
        if (kind == "fixed_point") {
            t.outcome = {Outcome::Kind::fixed_point, o.at("point").get<Index>(), 0, 0};
        } else if (kind == "cycle") {
            t.outcome = {Outcome::Kind::cycle, 0, o.at("start").get<Index>(), o.at("length").get<std::size_t>()};
        } else if (kind == "step_limit") {
            t.outcome = {Outcome::Kind::step_limit, 0, 0, 0};
        } else {
            throw ParseError("unknown outcome kind '" + kind + "'");
        }
        return t;
    });
}

// --- generator configs -----------------------------------------------------

json to_json(const GenConfig& config)
{
    json flavor = {{"kind", to_string(config.flavor.kind)}};
    if (config.flavor.kind == SpaceFlavor::Kind::euclidean) {
        flavor["dim"] = config.flavor.dim;
    }
    const auto& mf = config.map_flavor;
    json map_flavor = {{"kind", to_string(mf.kind)}};
    switch (mf.kind) {
    case MapFlavor::Kind::uniform_random: map_flavor["max_image"] = mf.max_image; break;
    case MapFlavor::Kind::hub:
        map_flavor["hub_index"] = mf.hub_index;
        map_flavor["spread"] = mf.spread;
        break;
    case MapFlavor::Kind::cycle: map_flavor["length"] = mf.length; break;
    case MapFlavor::Kind::single_random: break;
    }
    json doc = {{"point_count", config.point_count},
                {"flavor", std::move(flavor)},
                {"map_flavor", std::move(map_flavor)},
                {"seed", config.seed}};
    if (config.point_count_max != 0) {
        doc["point_count_max"] = config.point_count_max;
    }
    return doc;
}

GenConfig genconfig_from_json(const json& doc)
{
    auto config = decode("generator config", [&] {
        GenConfig c;
        c.point_count = doc.at("point_count").get<std::size_t>();
        c.point_count_max = doc.value("point_count_max", std::size_t{0});
        c.seed = doc.value("seed", std::uint64_t{0});

        // "flavor" may be a bare kind string or an object with parameters.
        const auto& f = doc.at("flavor");
        const auto fkind = f.is_string() ? f.get<std::string>() : f.at("kind").get<std::string>();
        if (fkind == "euclidean") {
            c.flavor.kind = SpaceFlavor::Kind::euclidean;
            c.flavor.dim = f.is_object() ? f.value("dim", std::size_t{2}) : 2;
        } else if (fkind == "closure_random") {
            c.flavor.kind = SpaceFlavor::Kind::closure_random;
        } else if (fkind == "line") {
            c.flavor.kind = SpaceFlavor::Kind::line;
        } else {
            throw ParseError("unknown space flavor '" + fkind + "'");
        }

        const auto& m = doc.at("map_flavor");
        const auto mkind = m.is_string() ? m.get<std::string>() : m.at("kind").get<std::string>();
        const json params = m.is_object() ? m : json::object();
        if (mkind == "uniform_random") {
            c.map_flavor.kind = MapFlavor::Kind::uniform_random;
            c.map_flavor.max_image = params.value("max_image", std::size_t{1});
        } else if (mkind == "hub") {
            c.map_flavor.kind = MapFlavor::Kind::hub;
            c.map_flavor.hub_index = params.value("hub_index", Index{0});
            c.map_flavor.spread = params.value("spread", std::size_t{0});
        } else if (mkind == "single_random") {
            c.map_flavor.kind = MapFlavor::Kind::single_random;
        } else if (mkind == "cycle") {
            c.map_flavor.kind = MapFlavor::Kind::cycle;
            c.map_flavor.length = params.value("length", std::size_t{2});
        } else {
            throw ParseError("unknown map flavor '" + mkind + "'");
        }
        return c;
    });
    try {
        config.check();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid generator config: ") + e.what());
    }
    return config;
}

// --- validation reports ----------------------------------------------------

json to_json(const ValidationReport& report)
{
    const auto& ev = report.evidence;
    json certs = json::array();
    for (const auto& c : ev.certificates) {
        certs.push_back(to_json(c));
    }
    json periodic = json::object();
    for (const auto& [k, pts] : ev.periodic) {
        periodic[std::to_string(k)] = pts;
    }
    json evidence = {{"certificates", std::move(certs)},
                     {"fixed_points", ev.fixed_points},
                     {"periodic", std::move(periodic)},
                     {"n", ev.n}};
    if (ev.instance) {
        evidence["instance"] = to_json(*ev.instance);
    }
    return {{"theorem", to_string(report.theorem)},
            {"hypothesis_held", report.hypothesis_held},
            {"conclusion_held", report.conclusion_held},
            {"verdict", to_string(report.verdict)},
            {"evidence", std::move(evidence)}};
}

ValidationReport report_from_json(const json& doc)
{
    return decode("validation report", [&] {
        ValidationReport r;
        r.theorem = parse_theorem_id(doc.at("theorem").get<std::string>());
        r.hypothesis_held = doc.at("hypothesis_held").get<bool>();
        r.conclusion_held = doc.at("conclusion_held").get<bool>();
        r.verdict = parse_verdict(doc.at("verdict").get<std::string>());
        const auto& ev = doc.at("evidence");
        for (const auto& c : ev.at("certificates")) {
            r.evidence.certificates.push_back(certificate_from_json(c));
        }
        r.evidence.fixed_points = ev.at("fixed_points").get<std::vector<Index>>();
        for (const auto& [k, pts] : ev.at("periodic").items()) {
            r.evidence.periodic[std::stoul(k)] = pts.get<std::vector<Index>>();
        }
        r.evidence.n = ev.at("n").get<std::size_t>();
        if (ev.contains("instance")) {
            r.evidence.instance = instance_from_json(ev.at("instance"));
        }
        return r;
    });
}

json to_json(const SweepSummary& summary)
{
    json reports = json::array();
    for (const auto& r : summary.reports) {
        reports.push_back(to_json(r));
    }
    return {{"validated", summary.validated},
            {"hypothesis_not_met", summary.hypothesis_not_met},
            {"counterexamples", summary.counterexamples},
            {"below_cardinality", summary.below_cardinality},
            {"reports", std::move(reports)}};
}

SweepSummary summary_from_json(const json& doc)
{
    return decode("sweep summary", [&] {
        SweepSummary s;
        s.validated = doc.at("validated").get<std::size_t>();
        s.hypothesis_not_met = doc.at("hypothesis_not_met").get<std::size_t>();
        s.counterexamples = doc.at("counterexamples").get<std::size_t>();
        s.below_cardinality = doc.value("below_cardinality", std::size_t{0});
        for (const auto& r : doc.at("reports")) {
            s.reports.push_back(report_from_json(r));
        }
        return s;
    });
}

} // namespace mvfix::io
