#include "mvfix/oracle.hpp"

#include "mvfix/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <string>

namespace mvfix {

namespace {

struct TheoremName {
    TheoremId id;
    std::string_view name;
};

constexpr TheoremName kTheoremNames[] = {
    {TheoremId::T2_4_two_fixed_points, "T2_4_two_fixed_points"},
    {TheoremId::T3_5_periodic_exists, "T3_5_periodic_exists"},
    {TheoremId::C3_10_single_perimeter_iff, "C3_10_single_perimeter_iff"},
    {TheoremId::C3_11_multi_perimeter_iff, "C3_11_multi_perimeter_iff"},
    {TheoremId::T4_3_orbital_fixed, "T4_3_orbital_fixed"},
    {TheoremId::T5_4_kannan_fixed, "T5_4_kannan_fixed"},
    {TheoremId::T6_4_chatterjea_fixed, "T6_4_chatterjea_fixed"},
    {TheoremId::C_banach_unique, "C_banach_unique"},
    {TheoremId::P3_3_downward, "P3_3_downward"},
    {TheoremId::P3_4_upward, "P3_4_upward"},
};

} // namespace

std::string_view to_string(TheoremId id)
{
    for (const auto& entry : kTheoremNames) {
        if (entry.id == id) {
            return entry.name;
        }
    }
    return "unknown";
}

TheoremId parse_theorem_id(std::string_view name)
{
    for (const auto& entry : kTheoremNames) {
        if (entry.name == name) {
            return entry.id;
        }
    }
    throw std::invalid_argument("unknown theorem id '" + std::string(name) + "'");
}

const std::vector<TheoremId>& all_theorems()
{
    static const std::vector<TheoremId> ids = [] {
        std::vector<TheoremId> out;
        for (const auto& entry : kTheoremNames) {
            out.push_back(entry.id);
        }
        return out;
    }();
    return ids;
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::validated: return "validated";
    case Verdict::hypothesis_not_met: return "hypothesis_not_met";
    case Verdict::counterexample: return "COUNTEREXAMPLE";
    }
    return "unknown";
}

Verdict parse_verdict(std::string_view name)
{
    for (auto v : {Verdict::validated, Verdict::hypothesis_not_met, Verdict::counterexample}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw std::invalid_argument("unknown verdict '" + std::string(name) + "'");
}

std::vector<Index> brute_fixed_points(const MultiMap& t)
{
    std::vector<Index> out;
    for (Index x = 0; x < t.size(); ++x) {
        const auto members = t(x).members();
        if (std::find(members.begin(), members.end(), x) != members.end()) {
            out.push_back(x);
        }
    }
    return out;
}

std::map<std::size_t, std::vector<Index>> brute_periodic(const MultiMap& t, std::size_t k_max)
{
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXi step = Eigen::MatrixXi::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Index y : t(static_cast<Index>(x)).members()) {
            step(x, static_cast<Eigen::Index>(y)) = 1;
        }
    }

    std::map<std::size_t, std::vector<Index>> out;
    std::vector<bool> returned(t.size(), false);
    Eigen::MatrixXi walks = step;  // walks(x, y) = 1 iff some walk of the current length joins x to y
    for (std::size_t k = 1; k <= k_max; ++k) {
        auto& bucket = out[k];
        for (Eigen::Index x = 0; x < n; ++x) {
            if (!returned[static_cast<std::size_t>(x)] && walks(x, x) != 0) {
                returned[static_cast<std::size_t>(x)] = true;
                bucket.push_back(static_cast<Index>(x));
            }
        }
        walks = (walks * step).cwiseMin(1);
    }
    return out;
}

namespace {

void require_points(const Instance& instance, std::size_t needed, TheoremId theorem)
{
    if (instance.space.size() < needed) {
        throw CardinalityError(std::string(to_string(theorem)) + " needs at least " + std::to_string(needed) +
                               " points, instance has " + std::to_string(instance.space.size()));
    }
}

bool within(const Certificate& lower, const Certificate& upper, double slack)
{
    if (!lower.tightest) {
        return true;
    }
    return upper.tightest && *lower.tightest <= *upper.tightest + slack;
}

} // namespace

ValidationReport validate(const Instance& instance, TheoremId theorem, const ValidateOptions& opts)
{
    const auto& space = instance.space;
    const auto& t = instance.map;
    require_same_size(space, t);
    const CertifyOptions co{opts.workers, opts.slack, opts.chatterjea_domain};

    ValidationReport report;
    report.theorem = theorem;
    auto& ev = report.evidence;
    ev.fixed_points = brute_fixed_points(t);
    const bool has_fixed = !ev.fixed_points.empty();

    bool hypothesis = false;
    bool conclusion = false;
    switch (theorem) {
    case TheoremId::T2_4_two_fixed_points: {
        require_points(instance, 4, theorem);
        ev.certificates.push_back(certify_perimeter(space, t, co));
        const auto single = as_single(t);
        hypothesis = single && ev.certificates[0].certified && condition_i(*single);
        conclusion = ev.fixed_points.size() <= 2;
        break;
    }
    case TheoremId::T3_5_periodic_exists: {
        const std::size_t n = opts.n == 0 ? 3 : opts.n;
        if (n < 2) {
            throw std::invalid_argument("T3_5 needs n >= 2");
        }
        require_points(instance, n, theorem);
        ev.n = n;
        ev.certificates.push_back(certify_total_pairwise(space, t, n, co));
        hypothesis = ev.certificates[0].certified;
        ev.periodic = brute_periodic(t, n - 1);
        conclusion = std::any_of(ev.periodic.begin(), ev.periodic.end(), [](const auto& kv) { return !kv.second.empty(); });
        break;
    }
    case TheoremId::C3_10_single_perimeter_iff:
    case TheoremId::C3_11_multi_perimeter_iff: {
        require_points(instance, 3, theorem);
        ev.certificates.push_back(certify_perimeter(space, t, co));
        hypothesis = ev.certificates[0].certified;
        if (theorem == TheoremId::C3_10_single_perimeter_iff) {
            hypothesis = hypothesis && t.single_valued();
        }
        ev.periodic = brute_periodic(t, 2);
        conclusion = has_fixed == ev.periodic[2].empty();
        break;
    }
    case TheoremId::T4_3_orbital_fixed:
    case TheoremId::T5_4_kannan_fixed:
    case TheoremId::T6_4_chatterjea_fixed: {
        require_points(instance, 2, theorem);
        const auto klass = theorem == TheoremId::T4_3_orbital_fixed  ? ContractionClass::orbital
                           : theorem == TheoremId::T5_4_kannan_fixed ? ContractionClass::kannan
                                                                     : ContractionClass::chatterjea;
        ev.certificates.push_back(certify(space, t, klass, 2, co));
        ev.periodic = brute_periodic(t, 2);
        hypothesis = ev.certificates[0].certified && no_period2(t);
        conclusion = has_fixed;
        break;
    }
    case TheoremId::C_banach_unique: {
        require_points(instance, 2, theorem);
        ev.certificates.push_back(certify_banach(space, t, co));
        hypothesis = t.single_valued() && ev.certificates[0].certified;
        conclusion = ev.fixed_points.size() == 1;
        break;
    }
    case TheoremId::P3_3_downward: {
        const std::size_t n = opts.n == 0 ? 4 : opts.n;
        if (n < 3) {
            throw std::invalid_argument("P3_3 needs n >= 3");
        }
        require_points(instance, n, theorem);
        ev.n = n;
        hypothesis = true;
        conclusion = true;
        for (std::size_t k = 2; k < n; ++k) {
            auto with_repeats = certify_total_pairwise_with_repeats(space, t, n, k, co);
            auto plain = certify_total_pairwise(space, t, k, co);
            hypothesis = hypothesis && with_repeats.certified;
            conclusion = conclusion && plain.certified && within(plain, with_repeats, opts.slack);
            ev.certificates.push_back(std::move(with_repeats));
            ev.certificates.push_back(std::move(plain));
        }
        break;
    }
    case TheoremId::P3_4_upward: {
        const std::size_t m = opts.n == 0 ? 2 : opts.n;
        if (m < 2) {
            throw std::invalid_argument("P3_4 needs m >= 2");
        }
        require_points(instance, m, theorem);
        ev.n = m;
        ev.certificates.push_back(certify_total_pairwise(space, t, m, co));
        hypothesis = ev.certificates[0].certified;
        conclusion = true;
        const std::size_t top = opts.n_max == 0 ? space.size() : std::min(opts.n_max, space.size());
        for (std::size_t n = m + 1; n <= top; ++n) {
            auto c = certify_total_pairwise(space, t, n, co);
            conclusion = conclusion && c.certified && within(c, ev.certificates[0], opts.slack);
            ev.certificates.push_back(std::move(c));
        }
        break;
    }
    }

    report.hypothesis_held = hypothesis;
    report.conclusion_held = conclusion;
    if (!hypothesis) {
        report.verdict = Verdict::hypothesis_not_met;
    } else if (conclusion) {
        report.verdict = Verdict::validated;
    } else {
        report.verdict = Verdict::counterexample;
        ev.instance = instance;
    }
    return report;
}

SweepSummary sweep(const SweepConfig& config)
{
    if (config.instance_count < 1) {
        throw std::invalid_argument("sweep needs at least one instance");
    }
    GenConfig gen = config.gen;
    gen.seed = config.seed;
    gen.check();

    ValidateOptions vopts = config.validate;
    vopts.workers = 1;  // parallelism lives at the instance level

    std::vector<std::optional<ValidationReport>> results(config.instance_count);
    parallel_for(config.instance_count, config.workers, [&](unsigned, std::size_t i) {
        const Instance instance = generate(gen, i);
        try {
            results[i] = validate(instance, config.theorem, vopts);
        } catch (const CardinalityError&) {
            results[i].reset();
        }
    });

    SweepSummary summary;
    for (auto& r : results) {
        if (!r) {
            ++summary.below_cardinality;
            continue;
        }
        switch (r->verdict) {
        case Verdict::validated: ++summary.validated; break;
        case Verdict::hypothesis_not_met: ++summary.hypothesis_not_met; break;
        case Verdict::counterexample:
            ++summary.counterexamples;
            summary.reports.push_back(std::move(*r));
            break;
        }
    }
    return summary;
}

} // namespace mvfix
