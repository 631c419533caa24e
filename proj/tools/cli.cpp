#include "cli.hpp"

#include "mvfix/certification.hpp"
#include "mvfix/generators.hpp"
#include "mvfix/iteration.hpp"
#include "mvfix/json_io.hpp"
#include "mvfix/oracle.hpp"

#include "CLI11.hpp"

#include <unistd.h>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace mvfix::cli {

namespace {

using io::json;

struct Globals {
    double tolerance = kDefaultSlack;
    unsigned workers = 0;
};

/// Thrown inside a subcommand to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

bool stderr_is_terminal()
{
    return ::isatty(::fileno(stderr)) != 0;
}

Instance load_instance(const std::string& path, double tolerance)
{
    return io::instance_from_json(io::read_file(path), tolerance);
}

json violation_json(const std::exception& e)
{
    json doc = {{"valid", false}, {"error", e.what()}};
    if (const auto* tri = dynamic_cast<const TriangleViolationError*>(&e)) {
        doc["violation"] = {{"kind", "triangle"}, {"indices", {tri->from, tri->to, tri->via}}, {"excess", tri->excess}};
    } else if (const auto* asym = dynamic_cast<const AsymmetryError*>(&e)) {
        doc["violation"] = {{"kind", "asymmetry"}, {"indices", {asym->row, asym->col}}};
    } else if (const auto* diag = dynamic_cast<const NonzeroDiagonalError*>(&e)) {
        doc["violation"] = {{"kind", "nonzero_diagonal"}, {"indices", {diag->index, diag->index}}};
    } else if (const auto* pos = dynamic_cast<const NonpositiveOffDiagonalError*>(&e)) {
        doc["violation"] = {{"kind", "nonpositive_off_diagonal"}, {"indices", {pos->row, pos->col}}};
    }
    return doc;
}

int cmd_validate(const std::string& path, const Globals& g, std::ostream& out)
{
    try {
        const auto instance = load_instance(path, g.tolerance);
        out << json{{"valid", true},
                    {"point_count", instance.space.size()},
                    {"map_kind", instance.kind == Instance::MapKind::single ? "single" : "multi"},
                    {"integral", instance.space.integral()}}
                   .dump()
            << '\n';
        return kSuccess;
    } catch (const MetricError& e) {
        out << violation_json(e).dump() << '\n';
        return kPrecondition;
    } catch (const MapError& e) {
        out << violation_json(e).dump() << '\n';
        return kPrecondition;
    }
}

void print_table(const std::vector<Certificate>& certs, std::ostream& err)
{
    err << std::left << std::setw(18) << "class" << std::setw(14) << "tightest" << std::setw(10) << "sup"
        << "certified\n";
    for (const auto& c : certs) {
        std::string name(to_string(c.klass));
        if (c.klass == ContractionClass::total_pairwise) {
            name += "(" + std::to_string(c.arity) + ")";
        }
        std::string tightest = c.tightest ? std::to_string(*c.tightest) : "-";
        err << std::setw(18) << name << std::setw(14) << tightest << std::setw(10) << std::setprecision(4)
            << c.admissible_sup << (c.certified ? "yes" : "no") << '\n';
    }
}

int cmd_certify(const std::string& path, std::vector<std::string> classes, std::size_t n, const std::string& domain,
                const Globals& g, std::ostream& out, std::ostream& err)
{
    const auto instance = load_instance(path, g.tolerance);
    if (classes.empty()) {
        classes = {"banach", "perimeter", "total_pairwise", "orbital", "kannan", "chatterjea"};
    }
    std::vector<ContractionClass> parsed;
    for (const auto& name : classes) {
        parsed.push_back(parse_contraction_class(name));
    }
    for (auto c : parsed) {
        const auto needed = minimum_points(c, n);
        if (instance.space.size() < needed) {
            throw Exit{kPrecondition, std::string(to_string(c)) + " needs at least " + std::to_string(needed) +
                                          " points; the space has " + std::to_string(instance.space.size())};
        }
    }
    CertifyOptions opts{g.workers, g.tolerance, parse_chatterjea_domain(domain)};
    std::vector<Certificate> certs;
    for (auto c : parsed) {
        certs.push_back(certify(instance.space, instance.map, c, n, opts));
        out << io::to_json(certs.back()).dump() << '\n';
    }
    if (stderr_is_terminal()) {
        print_table(certs, err);
    }
    return kSuccess;
}

struct IterateArgs {
    std::size_t x0 = 0;
    std::string policy = "first_index";
    std::uint64_t seed = 0;
    std::size_t max_steps = 0;
    std::string bounds_class;
    std::size_t n = 3;
    std::string domain = "restricted";
};

int cmd_iterate(const std::string& path, const IterateArgs& a, const Globals& g, std::ostream& out)
{
    const auto instance = load_instance(path, g.tolerance);
    const auto& space = instance.space;
    if (a.x0 >= space.size()) {
        throw Exit{kPrecondition, "x0 = " + std::to_string(a.x0) + " is outside the space"};
    }
    SelectionPolicy policy{parse_policy_kind(a.policy), a.seed};
    const std::size_t max_steps = a.max_steps == 0 ? space.size() + 1 : a.max_steps;
    const auto trace = picard_iterate(space, instance.map, a.x0, policy, max_steps);
    json doc = io::to_json(trace);

    if (!a.bounds_class.empty()) {
        const auto klass = parse_contraction_class(a.bounds_class);
        const auto domain = parse_chatterjea_domain(a.domain);
        if (space.size() < minimum_points(klass, a.n)) {
            throw Exit{kPrecondition, "space too small for class " + a.bounds_class};
        }
        const auto cert = certify(space, instance.map, klass, a.n, {g.workers, g.tolerance, domain});
        if (!cert.certified) {
            throw Exit{kPrecondition, "map is not certified for class " + a.bounds_class};
        }
        const auto rate = certified_rate(cert);
        if (!rate) {
            throw Exit{kPrecondition, "certificate for " + a.bounds_class + " is vacuous; no rate to bound with"};
        }
        const RateLawOptions ropts{a.n, domain, g.tolerance};
        json bounds = {{"class", to_string(klass)}, {"certificate", io::to_json(cert)}, {"rate", *rate}};
        try {
            const double p = initial_quantity_p(klass, space, instance.map, trace, a.n);
            bounds["p"] = p;
            json column = json::array();
            for (std::size_t i = 0; i < trace.points.size(); ++i) {
                column.push_back(a_priori_bound(*rate, p, i));
            }
            bounds["a_priori"] = std::move(column);
        } catch (const TraceTooShort& e) {
            bounds["p"] = nullptr;
            bounds["note"] = e.what();
        }
        json links = json::array();
        bool all_hold = true;
        for (const auto& l : rate_law(klass, space, instance.map, trace, *rate, ropts)) {
            links.push_back({{"index", l.index}, {"in_domain", l.in_domain}, {"before", l.before}, {"after", l.after},
                             {"holds", l.holds}});
            all_hold = all_hold && (!l.in_domain || l.holds);
        }
        bounds["rate_law"] = {{"links", std::move(links)}, {"in_domain_links_hold", all_hold}};
        if (trace.outcome.kind == Outcome::Kind::fixed_point) {
            const auto report = bound_domination(klass, space, instance.map, trace, *rate, ropts);
            bounds["distances_to_terminal"] = report.distances;
            bounds["chain_valid"] = report.chain_valid;
            bounds["dominated"] = report.dominated;
        }
        doc["bounds"] = std::move(bounds);
    }
    out << doc.dump() << '\n';
    return kSuccess;
}

struct TheoremArgs {
    std::string theorem;
    std::string instance_path;
    std::string config_path;
    std::size_t count = 100;
    std::optional<std::uint64_t> seed;
    std::size_t n = 0;
    std::size_t n_max = 0;
    std::string domain = "restricted";
    std::string out_path;
};

std::filesystem::path bundle_path(const std::string& out_path)
{
    if (out_path.empty()) {
        return "counterexamples.json";
    }
    std::filesystem::path p(out_path);
    return p.parent_path() / (p.stem().string() + ".counterexamples.json");
}

int cmd_theorem(const TheoremArgs& a, const Globals& g, std::ostream& out)
{
    const auto theorem = parse_theorem_id(a.theorem);
    ValidateOptions vopts;
    vopts.n = a.n;
    vopts.n_max = a.n_max;
    vopts.chatterjea_domain = parse_chatterjea_domain(a.domain);
    vopts.slack = g.tolerance;
    vopts.workers = g.workers;

    SweepSummary summary;
    if (!a.instance_path.empty()) {
        const auto instance = load_instance(a.instance_path, g.tolerance);
        ValidationReport report;
        try {
            report = validate(instance, theorem, vopts);
        } catch (const CardinalityError& e) {
            throw Exit{kPrecondition, e.what()};
        }
        switch (report.verdict) {
        case Verdict::validated: summary.validated = 1; break;
        case Verdict::hypothesis_not_met: summary.hypothesis_not_met = 1; break;
        case Verdict::counterexample: summary.counterexamples = 1; break;
        }
        summary.reports.push_back(std::move(report));
    } else {
        SweepConfig config;
        config.gen = io::genconfig_from_json(io::read_file(a.config_path));
        config.theorem = theorem;
        config.instance_count = a.count;
        config.seed = a.seed.value_or(config.gen.seed);
        config.validate = vopts;
        config.workers = g.workers;
        summary = sweep(config);
    }

    const json doc = io::to_json(summary);
    if (!a.out_path.empty()) {
        io::write_file(a.out_path, doc);
    }
    out << doc.dump() << '\n';
    if (summary.counterexamples > 0) {
        json bundle = json::array();
        for (const auto& r : summary.reports) {
            if (r.verdict == Verdict::counterexample) {
                bundle.push_back(io::to_json(r));
            }
        }
        io::write_file(bundle_path(a.out_path), bundle);
        return kCounterexample;
    }
    return kSuccess;
}

int cmd_gen(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path,
            std::ostream& out)
{
    auto config = io::genconfig_from_json(io::read_file(config_path));
    if (seed) {
        config.seed = *seed;
    }
    auto instance = generate(config);
    instance.metadata["generator"] = io::to_json(config).dump();
    io::write_file(out_path, io::to_json(instance));
    out << out_path << '\n';
    return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Contraction-class certification and fixed-point search for maps on finite metric spaces"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--tolerance", g.tolerance, "Comparison slack for all inequality checks")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--workers", g.workers, "Worker threads (0 = machine parallelism)");
    app.fallthrough();

    std::string path;

    auto* validate_cmd = app.add_subcommand("validate", "Check an instance file's invariants");
    validate_cmd->add_option("path", path, "Instance file")->required();

    std::vector<std::string> classes;
    std::size_t certify_n = 3;
    std::string certify_domain = "restricted";
    auto* certify_cmd = app.add_subcommand("certify", "Certify contraction classes for an instance");
    certify_cmd->add_option("path", path, "Instance file")->required();
    certify_cmd->add_option("--class", classes, "Class to certify (repeatable; default all)");
    certify_cmd->add_option("--n", certify_n, "Point count for total_pairwise")->check(CLI::Range(2, 1 << 20));
    certify_cmd->add_option("--chatterjea-domain", certify_domain, "restricted or unrestricted");

    IterateArgs iterate_args;
    auto* iterate_cmd = app.add_subcommand("iterate", "Run Picard iteration from a starting point");
    iterate_cmd->add_option("path", path, "Instance file")->required();
    iterate_cmd->add_option("--x0", iterate_args.x0, "Starting point")->required();
    iterate_cmd->add_option("--policy", iterate_args.policy, "first_index, nearest, farthest or seeded_random");
    iterate_cmd->add_option("--seed", iterate_args.seed, "Seed for seeded_random");
    iterate_cmd->add_option("--max-steps", iterate_args.max_steps, "Step budget (default point_count + 1)");
    iterate_cmd->add_option("--bounds-class", iterate_args.bounds_class, "Attach a priori bounds for this class");
    iterate_cmd->add_option("--n", iterate_args.n, "Point count for total_pairwise bounds");
    iterate_cmd->add_option("--chatterjea-domain", iterate_args.domain, "restricted or unrestricted");

    TheoremArgs theorem_args;
    std::uint64_t theorem_seed = 0;
    auto* theorem_cmd = app.add_subcommand("theorem", "Validate a theorem on one instance or a generated sweep");
    theorem_cmd->add_option("--theorem", theorem_args.theorem, "Theorem id")->required();
    auto* inst_opt = theorem_cmd->add_option("--instance", theorem_args.instance_path, "Instance file");
    auto* conf_opt = theorem_cmd->add_option("--config", theorem_args.config_path, "Generator config for a sweep");
    inst_opt->excludes(conf_opt);
    theorem_cmd->add_option("--count", theorem_args.count, "Sweep size");
    auto* theorem_seed_opt = theorem_cmd->add_option("--seed", theorem_seed, "Sweep seed (default: config seed)");
    theorem_cmd->add_option("--n", theorem_args.n, "n for T3_5/P3_3, m for P3_4");
    theorem_cmd->add_option("--n-max", theorem_args.n_max, "Largest n checked by P3_4");
    theorem_cmd->add_option("--chatterjea-domain", theorem_args.domain, "restricted or unrestricted");
    theorem_cmd->add_option("--out", theorem_args.out_path, "Also write the summary here");

    std::string gen_config;
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file from a generator config");
    gen_cmd->add_option("--config", gen_config, "Generator config file")->required();
    gen_cmd->add_option("--out", gen_out, "Destination instance file")->required();
    auto* gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "Override the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kIoOrParse;
    }

    try {
        if (*validate_cmd) {
            return cmd_validate(path, g, out);
        }
        if (*certify_cmd) {
            return cmd_certify(path, classes, certify_n, certify_domain, g, out, err);
        }
        if (*iterate_cmd) {
            return cmd_iterate(path, iterate_args, g, out);
        }
        if (*theorem_cmd) {
            if (theorem_args.instance_path.empty() && theorem_args.config_path.empty()) {
                err << "theorem needs --instance or --config\n";
                return kIoOrParse;
            }
            if (*theorem_seed_opt) {
                theorem_args.seed = theorem_seed;
            }
            return cmd_theorem(theorem_args, g, out);
        }
        if (*gen_cmd) {
            return cmd_gen(gen_config, *gen_seed_opt ? std::optional<std::uint64_t>(gen_seed) : std::nullopt, gen_out,
                           out);
        }
    } catch (const Exit& e) {
        err << e.message << '\n';
        return e.code;
    } catch (const io::IoError& e) {
        err << e.what() << '\n';
        return kIoOrParse;
    } catch (const io::ParseError& e) {
        err << e.what() << '\n';
        return kIoOrParse;
    } catch (const MetricError& e) {
        err << e.what() << '\n';
        return kPrecondition;
    } catch (const MapError& e) {
        err << e.what() << '\n';
        return kPrecondition;
    } catch (const std::invalid_argument& e) {
        // Unknown class/policy/theorem names and out-of-range parameters.
        err << e.what() << '\n';
        return kPrecondition;
    }
    return kIoOrParse;
}

} // namespace mvfix::cli
