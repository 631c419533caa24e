#include "mvfix/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace mvfix {

std::string_view to_string(SelectionPolicy::Kind kind)
{
    switch (kind) {
    case SelectionPolicy::Kind::first_index: return "first_index";
    case SelectionPolicy::Kind::nearest: return "nearest";
    case SelectionPolicy::Kind::farthest: return "farthest";
    case SelectionPolicy::Kind::seeded_random: return "seeded_random";
    }
    return "unknown";
}

SelectionPolicy::Kind parse_policy_kind(std::string_view name)
{
    for (auto k : {SelectionPolicy::Kind::first_index, SelectionPolicy::Kind::nearest, SelectionPolicy::Kind::farthest,
                   SelectionPolicy::Kind::seeded_random}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown selection policy '" + std::string(name) + "'");
}

std::string_view to_string(Outcome::Kind kind)
{
    switch (kind) {
    case Outcome::Kind::fixed_point: return "fixed_point";
    case Outcome::Kind::cycle: return "cycle";
    case Outcome::Kind::step_limit: return "step_limit";
    }
    return "unknown";
}

namespace {

// Knuth's MMIX generator. Its whole state is the last output, which lets the
// random policy key repeat detection on (point, state).
using SelectionEngine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0>;

Index select_member(const MetricSpaceD& space, Index current, const PointSet& image, const SelectionPolicy& policy,
                    SelectionEngine& engine, std::uint64_t& state)
{
    const auto members = image.members();
    switch (policy.kind) {
    case SelectionPolicy::Kind::first_index:
        return members.front();
    case SelectionPolicy::Kind::nearest: {
        Index best = members.front();
        for (Index m : members) {
            if (space(current, m) < space(current, best)) {
                best = m;
            }
        }
        return best;
    }
    case SelectionPolicy::Kind::farthest: {
        Index best = members.front();
        for (Index m : members) {
            if (space(current, m) > space(current, best)) {
                best = m;
            }
        }
        return best;
    }
    case SelectionPolicy::Kind::seeded_random: {
        state = engine();
        return members[(state >> 32) % members.size()];
    }
    }
    return members.front();
}

} // namespace

OrbitTrace picard_iterate(const MetricSpaceD& space, const MultiMap& t, Index x0, SelectionPolicy policy,
                          std::size_t max_steps)
{
    require_same_size(space, t);
    if (x0 >= space.size()) {
        throw std::out_of_range("starting point " + std::to_string(x0) + " outside space");
    }
    if (max_steps == 0) {
        throw std::invalid_argument("max_steps must be positive");
    }

    OrbitTrace trace;
    trace.policy = policy;
    trace.points.push_back(x0);

    SelectionEngine engine(policy.seed);
    std::uint64_t state = policy.seed;
    std::map<std::pair<Index, std::uint64_t>, std::size_t> seen;
    auto key = [&](Index x) { return std::make_pair(x, policy.deterministic() ? 0 : state); };
    seen.emplace(key(x0), 0);

    Index current = x0;
    while (true) {
        if (t(current).contains(current)) {
            trace.outcome = {Outcome::Kind::fixed_point, current, 0, 0};
            break;
        }
        if (trace.steps_taken == max_steps) {
            trace.outcome = {Outcome::Kind::step_limit, 0, 0, 0};
            break;
        }
        const Index next = select_member(space, current, t(current), policy, engine, state);
        trace.step_dists.push_back(space(current, next));
        trace.points.push_back(next);
        ++trace.steps_taken;
        const std::size_t position = trace.points.size() - 1;
        const auto [it, inserted] = seen.emplace(key(next), position);
        if (!inserted) {
            trace.outcome = {Outcome::Kind::cycle, 0, it->second, position - it->second};
            break;
        }
        current = next;
    }
    return trace;
}

double effective_rate(ContractionClass c, double constant)
{
    const double sup = admissible_sup(c);
    const bool strict_lower = c == ContractionClass::chatterjea;
    const bool in_range = (strict_lower ? constant > 0.0 : constant >= 0.0) && constant < sup;
    if (!in_range) {
        throw OutOfRange("constant " + std::to_string(constant) + " outside the admissible range of class " +
                         std::string(to_string(c)));
    }
    switch (c) {
    case ContractionClass::kannan: return constant / (2.0 - constant);
    case ContractionClass::chatterjea: return constant / (1.0 - constant);
    default: return constant;
    }
}

std::optional<double> certified_rate(const Certificate& cert)
{
    if (!cert.certified || !cert.tightest) {
        return std::nullopt;
    }
    if (cert.klass == ContractionClass::chatterjea && *cert.tightest == 0.0) {
        return 0.0;
    }
    return effective_rate(cert.klass, *cert.tightest);
}

std::optional<Index> orbit_point(const OrbitTrace& trace, std::size_t i)
{
    if (i < trace.points.size()) {
        return trace.points[i];
    }
    switch (trace.outcome.kind) {
    case Outcome::Kind::fixed_point:
        return trace.outcome.point;
    case Outcome::Kind::cycle: {
        const std::size_t s = trace.outcome.start;
        return trace.points[s + (i - s) % trace.outcome.length];
    }
    case Outcome::Kind::step_limit:
        break;
    }
    return std::nullopt;
}

namespace {

std::optional<std::vector<Index>> window(const OrbitTrace& trace, std::size_t k, std::size_t len)
{
    std::vector<Index> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        const auto x = orbit_point(trace, k + i);
        if (!x) {
            return std::nullopt;
        }
        out.push_back(*x);
    }
    return out;
}

std::size_t window_length(ContractionClass c, std::size_t n_for_S)
{
    switch (c) {
    case ContractionClass::banach:
    case ContractionClass::kannan: return 2;
    case ContractionClass::total_pairwise: return n_for_S;
    default: return 3;
    }
}

bool pairwise_distinct(std::vector<Index> xs)
{
    std::sort(xs.begin(), xs.end());
    return std::adjacent_find(xs.begin(), xs.end()) == xs.end();
}

/// Whether the tuple behind link k (Q_{k+1} <= rate * Q_k) lies in the class domain.
std::optional<bool> link_in_domain(ContractionClass c, const MultiMap& t, const OrbitTrace& trace, std::size_t k,
                                   const RateLawOptions& opts)
{
    switch (c) {
    case ContractionClass::banach:
    case ContractionClass::perimeter:
    case ContractionClass::total_pairwise: {
        const auto w = window(trace, k, window_length(c, opts.n_for_S));
        if (!w) {
            return std::nullopt;
        }
        return pairwise_distinct(*w);
    }
    case ContractionClass::orbital:
    case ContractionClass::kannan:
    case ContractionClass::chatterjea: {
        const auto x = orbit_point(trace, k);
        const auto y = orbit_point(trace, k + 2);
        if (!x || !y) {
            return std::nullopt;
        }
        if (c == ContractionClass::orbital) {
            return in_orbital_domain(t, *x, *y);
        }
        if (c == ContractionClass::kannan) {
            return in_kannan_domain(t, *x, *y);
        }
        return in_chatterjea_domain(t, *x, *y, opts.chatterjea_domain);
    }
    }
    return std::nullopt;
}

} // namespace

std::optional<double> chain_quantity(ContractionClass c, const MetricSpaceD& space, const OrbitTrace& trace,
                                     std::size_t k, std::size_t n_for_S)
{
    if (c == ContractionClass::total_pairwise && n_for_S < 2) {
        throw std::invalid_argument("total pairwise chain needs n >= 2");
    }
    const auto w = window(trace, k, window_length(c, n_for_S));
    if (!w) {
        return std::nullopt;
    }
    if (c == ContractionClass::orbital || c == ContractionClass::chatterjea) {
        return perimeter(space, (*w)[0], (*w)[1], (*w)[2]);
    }
    return total_pairwise(space, std::span<const Index>(*w));
}

double initial_quantity_p(ContractionClass c, const MetricSpaceD& space, const MultiMap& t, const OrbitTrace& trace,
                          std::size_t n_for_S)
{
    require_same_size(space, t);
    const auto p = chain_quantity(c, space, trace, 0, n_for_S);
    if (!p) {
        throw TraceTooShort("trace has too few points to compute p for class " + std::string(to_string(c)));
    }
    return *p;
}

double a_priori_bound(double rate, double p, std::size_t n)
{
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw OutOfRange("rate must lie in [0, 1)");
    }
    return std::pow(rate, static_cast<double>(n)) * p / (1.0 - rate);
}

std::size_t required_steps(double rate, double p, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("eps must be positive");
    }
    if (a_priori_bound(rate, p, 0) <= eps) {
        return 0;
    }
    if (rate == 0.0) {
        return 1;
    }
    const double estimate = std::ceil(std::log(eps * (1.0 - rate) / p) / std::log(rate));
    auto n = static_cast<std::size_t>(std::max(1.0, estimate));
    while (a_priori_bound(rate, p, n) > eps) {
        ++n;
    }
    while (n > 1 && a_priori_bound(rate, p, n - 1) <= eps) {
        --n;
    }
    return n;
}

std::vector<RateLawLink> rate_law(ContractionClass c, const MetricSpaceD& space, const MultiMap& t,
                                  const OrbitTrace& trace, double rate, const RateLawOptions& opts)
{
    require_same_size(space, t);
    std::vector<RateLawLink> links;
    for (std::size_t k = 0; k + 1 < trace.points.size(); ++k) {
        const auto before = chain_quantity(c, space, trace, k, opts.n_for_S);
        const auto after = chain_quantity(c, space, trace, k + 1, opts.n_for_S);
        const auto in_domain = link_in_domain(c, t, trace, k, opts);
        if (!before || !after || !in_domain) {
            break;
        }
        RateLawLink link;
        link.index = k;
        link.in_domain = *in_domain;
        link.before = *before;
        link.after = *after;
        link.holds = *after <= rate * *before + opts.slack;
        links.push_back(link);
    }
    return links;
}

BoundReport bound_domination(ContractionClass c, const MetricSpaceD& space, const MultiMap& t, const OrbitTrace& trace,
                             double rate, const RateLawOptions& opts)
{
    if (trace.outcome.kind != Outcome::Kind::fixed_point) {
        throw std::invalid_argument("bound domination needs a trace that ends at a fixed point");
    }
    const double p = initial_quantity_p(c, space, t, trace, opts.n_for_S);
    const std::size_t last = trace.points.size() - 1;
    const Index terminal = trace.points[last];

    BoundReport report;
    report.chain_valid = true;
    for (std::size_t k = 0; k + 1 < last; ++k) {
        const auto in_domain = link_in_domain(c, t, trace, k, opts);
        if (!in_domain || !*in_domain) {
            report.chain_valid = false;
            break;
        }
    }
    report.dominated = true;
    for (std::size_t n = 0; n <= last; ++n) {
        report.bounds.push_back(a_priori_bound(rate, p, n));
        report.distances.push_back(space(trace.points[n], terminal));
        if (report.distances.back() > report.bounds.back() + opts.slack) {
            report.dominated = false;
        }
    }
    return report;
}

} // namespace mvfix
