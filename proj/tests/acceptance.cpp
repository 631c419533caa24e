// Acceptance run: every criterion at its pinned tolerance, one PASS/FAIL
// line each. Exit status is the number of failed criteria (capped at 1).

#include "mvfix/certification.hpp"
#include "mvfix/generators.hpp"
#include "mvfix/iteration.hpp"
#include "mvfix/json_io.hpp"
#include "mvfix/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace mvfix;

namespace {

constexpr double kTol = 1e-9;

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int g_failed = 0;

void report(const std::string& id, bool pass, const std::string& detail)
{
    std::cout << (pass ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
    if (!pass) {
        ++g_failed;
    }
}

void note(const std::string& text)
{
    std::cout << "     " << text << std::endl;
}

std::string fmt(double v, int prec = 2)
{
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << v;
    return s.str();
}

/// Candidate instances for hypothesis-filtered criteria. Mostly hub maps with
/// a nonzero spread so that certified maps are not all constant.
Instance candidate(std::uint64_t stream, std::uint64_t index, std::size_t n_min, std::size_t n_max)
{
    std::mt19937_64 rng(derive_seed(stream, index));
    GenConfig g;
    g.point_count = n_min;
    g.point_count_max = n_max > n_min ? n_max : 0;
    const auto flavor = rng() % 3;
    g.flavor.kind = flavor == 0 ? SpaceFlavor::Kind::euclidean
                    : flavor == 1 ? SpaceFlavor::Kind::closure_random
                                  : SpaceFlavor::Kind::line;
    g.flavor.dim = 1 + rng() % 3;
    const auto pick = rng() % 10;
    if (pick < 7) {
        g.map_flavor.kind = MapFlavor::Kind::hub;
        g.map_flavor.hub_index = rng() % n_min;
        g.map_flavor.spread = 1 + rng() % 3;
    } else if (pick < 9) {
        g.map_flavor.kind = MapFlavor::Kind::uniform_random;
        g.map_flavor.max_image = 1 + rng() % 3;
    } else {
        g.map_flavor.kind = MapFlavor::Kind::single_random;
    }
    g.seed = rng();
    return generate(g);
}

/// Single-valued map drawing each image from the spread+1 points nearest a hub.
Instance single_hub_candidate(std::uint64_t stream, std::uint64_t index, std::size_t n_min, std::size_t n_max)
{
    std::mt19937_64 rng(derive_seed(stream, index));
    const std::size_t n = n_min + rng() % (n_max - n_min + 1);
    const auto flavor = rng() % 3;
    const auto space = flavor == 0   ? random_euclidean_space(n, 1 + rng() % 3, rng())
                       : flavor == 1 ? random_metric_space(n, rng())
                                     : line_space(n);
    const auto multi = hub_map(space, rng() % n, 1 + rng() % 3, rng());
    std::vector<Index> target;
    for (const auto& img : multi.targets()) {
        target.push_back(img.members()[rng() % img.size()]);
    }
    return {space, lift_single(SingleMap(target)), Instance::MapKind::single, {}};
}

/// Scans candidates until `want` satisfy `keep`; returns the scanned count.
std::size_t collect(std::size_t want, std::size_t cap, const std::function<Instance(std::uint64_t)>& make,
                    const std::function<bool(const Instance&)>& keep, std::vector<Instance>& out)
{
    std::size_t scanned = 0;
    for (std::uint64_t i = 0; out.size() < want && scanned < cap; ++i, ++scanned) {
        auto inst = make(i);
        if (keep(inst)) {
            out.push_back(std::move(inst));
        }
    }
    return scanned;
}

// ---------------------------------------------------------------------------

void criterion_1()
{
    Clock clock;
    std::mt19937_64 rng(1);
    std::size_t failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        const auto space = (trial % 2 == 0 || n < 2) ? random_euclidean_space(n, 1 + rng() % 3, rng())
                                                     : random_metric_space(n, rng());
        auto random_set = [&] {
            std::vector<Index> v(1 + rng() % n);
            for (auto& x : v) x = rng() % n;
            return PointSet(v);
        };
        const auto a = random_set();
        const auto b = random_set();
        const Index x = rng() % n;
        const Index y = rng() % n;
        double diam = 0.0;
        for (Index p : a) {
            for (Index q : a) diam = std::max(diam, space(p, q));
        }
        const bool ok = delta_distance(space, a, b) == delta_distance(space, b, a) &&
                        delta_distance(space, PointSet::singleton(x), PointSet::singleton(y)) == space(x, y) &&
                        delta_distance(space, a, a) == diam && diameter(space, a) == diam;
        failures += ok ? 0 : 1;
    }
    const double t = clock.seconds();
    report("1 delta laws", failures == 0 && t < 5.0,
           "1000 triples, " + std::to_string(failures) + " failures, " + fmt(t) + " s (limit 5 s)");
}

void criterion_2()
{
    Clock clock;
    std::mt19937_64 rng(2);
    std::size_t failures = 0;
    std::size_t checked = 0;
    for (std::uint64_t i = 0; checked < 200; ++i) {
        auto inst = candidate(2, i, 3, 10);
        if (inst.map.single_valued() && i % 2 == 0) {
            continue;  // keep the sample weighted toward genuinely multivalued maps
        }
        ++checked;
        auto same = [](Certificate a, Certificate b) {
            auto ja = io::to_json(a);
            auto jb = io::to_json(b);
            ja.erase("class");
            jb.erase("class");
            ja.erase("below_cardinality_bound");
            jb.erase("below_cardinality_bound");
            return ja.dump() == jb.dump();
        };
        const bool ok = same(certify_total_pairwise(inst.space, inst.map, 2), certify_banach(inst.space, inst.map)) &&
                        same(certify_total_pairwise(inst.space, inst.map, 3), certify_perimeter(inst.space, inst.map));
        failures += ok ? 0 : 1;
    }
    const double t = clock.seconds();
    report("2 class coincidence", failures == 0 && t < 30.0,
           "200 multimaps, " + std::to_string(failures) + " mismatches, " + fmt(t) + " s (limit 30 s)");
}

void criterion_3()
{
    Clock clock;
    std::vector<Instance> sample;
    const auto scanned = collect(
        100, 200000, [](std::uint64_t i) { return candidate(3, i, 8, 10); },
        [](const Instance& inst) { return certify_total_pairwise(inst.space, inst.map, 4).certified; }, sample);

    std::size_t failures = 0;
    std::size_t first_failure = sample.size();
    std::string first_detail;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& inst = sample[i];
        const double alpha = *certify_total_pairwise(inst.space, inst.map, 4).tightest;
        bool ok = true;
        for (std::size_t k : {2u, 3u}) {
            const auto c = certify_total_pairwise(inst.space, inst.map, k);
            if (!c.certified || !c.tightest || *c.tightest > alpha + kTol) {
                ok = false;
                if (first_failure == sample.size()) {
                    first_failure = i;
                    first_detail = "k=" + std::to_string(k) + " tightest " + fmt(c.tightest.value_or(0.0), 4) +
                                   " vs n=4 constant " + fmt(alpha, 4);
                }
            }
        }
        failures += ok ? 0 : 1;
    }
    const double t = clock.seconds();
    report("3 downward closure (literal)", sample.size() == 100 && failures == 0 && t < 120.0,
           std::to_string(sample.size()) + " instances certified at n=4 (" + std::to_string(scanned) + " scanned), " +
               std::to_string(failures) + " fail at k=2 or 3, " + fmt(t) + " s (limit 120 s)");
    if (failures > 0) {
        note("first failure: instance " + std::to_string(first_failure) + ", " + first_detail);
        note("the n=4 inequality over distinct points does not constrain pairs; see 3b for the repeated-tuple form");
    }

    // 3b: hypothesis strengthened to n-tuples that may repeat points.
    ValidateOptions opts;
    opts.n = 4;
    std::vector<Instance> strong;
    const auto scanned_b = collect(
        100, 400000, [](std::uint64_t i) { return candidate(33, i, 8, 10); },
        [&](const Instance& inst) { return validate(inst, TheoremId::P3_3_downward, opts).hypothesis_held; }, strong);
    std::size_t counterexamples = 0;
    for (const auto& inst : strong) {
        counterexamples += validate(inst, TheoremId::P3_3_downward, opts).verdict == Verdict::counterexample ? 1 : 0;
    }
    report("3b downward closure (repeated tuples)", strong.size() == 100 && counterexamples == 0,
           std::to_string(strong.size()) + " instances meet the repeated-tuple hypothesis (" +
               std::to_string(scanned_b) + " scanned), " + std::to_string(counterexamples) + " counterexamples");
}

void criterion_4()
{
    Clock clock;
    std::vector<Instance> sample;
    const auto scanned = collect(
        100, 200000, [](std::uint64_t i) { return candidate(4, i, 4, 9); },
        [](const Instance& inst) { return certify_banach(inst.space, inst.map).certified; }, sample);
    std::size_t failures = 0;
    ValidateOptions opts;
    opts.n = 2;
    opts.n_max = 4;
    for (const auto& inst : sample) {
        const auto r = validate(inst, TheoremId::P3_4_upward, opts);
        failures += r.verdict == Verdict::validated ? 0 : 1;
    }
    report("4 upward closure", sample.size() == 100 && failures == 0,
           std::to_string(sample.size()) + " instances certified at m=2 (" + std::to_string(scanned) +
               " scanned), " + std::to_string(failures) + " fail at n=3 or 4, " + fmt(clock.seconds()) + " s");
}

void criterion_5()
{
    Clock clock;
    std::size_t total = 0;
    std::size_t counterexamples = 0;
    std::string detail;
    for (std::size_t n : {3u, 4u}) {
        ValidateOptions opts;
        opts.n = n;
        std::size_t passing = 0;
        std::size_t scanned = 0;
        std::size_t max_period = 0;
        for (std::uint64_t i = 0; passing < 500 && scanned < 200000; ++i, ++scanned) {
            const auto inst = candidate(50 + n, i, 5, 10);
            const auto r = validate(inst, TheoremId::T3_5_periodic_exists, opts);
            if (!r.hypothesis_held) continue;
            ++passing;
            if (r.verdict == Verdict::counterexample) ++counterexamples;
            for (const auto& [k, pts] : r.evidence.periodic) {
                if (!pts.empty()) max_period = std::max(max_period, k);
            }
        }
        total += passing;
        detail += "n=" + std::to_string(n) + ": " + std::to_string(passing) + " passing of " +
                  std::to_string(scanned) + " scanned; ";
    }
    const double t = clock.seconds();
    report("5 periodic point sweep", total == 1000 && counterexamples == 0 && t < 300.0,
           detail + std::to_string(counterexamples) + " counterexamples, " + fmt(t) + " s (limit 300 s)");
}

void criterion_6()
{
    Clock clock;
    bool all_ok = true;
    std::string detail;
    for (auto theorem : {TheoremId::T4_3_orbital_fixed, TheoremId::T5_4_kannan_fixed, TheoremId::T6_4_chatterjea_fixed}) {
        std::size_t passing = 0;
        std::size_t non_vacuous = 0;
        std::size_t nonconstant = 0;
        std::size_t counterexamples = 0;
        std::size_t scanned = 0;
        for (std::uint64_t i = 0; passing < 300 && scanned < 400000; ++i, ++scanned) {
            const auto inst = candidate(60 + static_cast<std::uint64_t>(theorem), i, 3, 8);
            const auto r = validate(inst, theorem);
            if (!r.hypothesis_held) continue;
            const auto& cert = r.evidence.certificates.at(0);
            // Vacuous certificates are kept only when no non-vacuous one turns up.
            if (cert.domain_empty) continue;
            ++passing;
            ++non_vacuous;
            if (fixed_points(inst.map).size() < inst.space.size() &&
                !(inst.map.targets() == std::vector<PointSet>(inst.space.size(), inst.map(0)))) {
                ++nonconstant;
            }
            if (r.verdict == Verdict::counterexample) ++counterexamples;
        }
        all_ok = all_ok && passing == 300 && counterexamples == 0;
        detail += std::string(to_string(theorem)).substr(0, 4) + " " + std::to_string(passing) + "/" +
                  std::to_string(scanned) + " (non-vacuous " + std::to_string(non_vacuous) + ", non-constant " +
                  std::to_string(nonconstant) + ", " + std::to_string(counterexamples) + " counterexamples); ";
    }
    report("6 fixed point sweeps", all_ok, detail + fmt(clock.seconds()) + " s");
}

void criterion_7()
{
    Clock clock;
    std::vector<Instance> perim;
    const auto scanned_p = collect(
        300, 400000, [](std::uint64_t i) { return single_hub_candidate(7, i, 4, 9); },
        [](const Instance& inst) {
            return certify_perimeter(inst.space, inst.map).certified && condition_i(*as_single(inst.map));
        },
        perim);
    std::size_t too_many = 0;
    std::size_t two = 0;
    for (const auto& inst : perim) {
        const auto fp = brute_fixed_points(inst.map).size();
        too_many += fp > 2 ? 1 : 0;
        two += fp == 2 ? 1 : 0;
    }

    std::vector<Instance> banach;
    const auto scanned_b = collect(
        300, 400000, [](std::uint64_t i) { return single_hub_candidate(77, i, 2, 9); },
        [](const Instance& inst) { return certify_banach(inst.space, inst.map).certified; }, banach);
    std::size_t not_unique = 0;
    for (const auto& inst : banach) {
        not_unique += brute_fixed_points(inst.map).size() == 1 ? 0 : 1;
    }
    report("7 fixed point counts", perim.size() == 300 && banach.size() == 300 && too_many == 0 && not_unique == 0,
           "perimeter " + std::to_string(perim.size()) + "/" + std::to_string(scanned_p) + " scanned, " +
               std::to_string(too_many) + " with >2 fixed points (" + std::to_string(two) + " with exactly 2); banach " +
               std::to_string(banach.size()) + "/" + std::to_string(scanned_b) + " scanned, " +
               std::to_string(not_unique) + " without a unique fixed point; " + fmt(clock.seconds()) + " s");
}

void criterion_8()
{
    Clock clock;
    const bool spots = effective_rate(ContractionClass::kannan, 0.5) == 1.0 / 3.0 &&
                       effective_rate(ContractionClass::chatterjea, 0.25) == 1.0 / 3.0;
    report("8a effective rate spot values", spots, "kannan 1/2 -> 1/3, chatterjea 1/4 -> 1/3");

    struct Run {
        ContractionClass klass;
        std::size_t n;
        bool no_period_two;  // sample only maps without prime-period-2 points
    };
    const std::vector<Run> runs = {
        {ContractionClass::banach, 2, false},  {ContractionClass::perimeter, 3, false},
        {ContractionClass::total_pairwise, 4, false}, {ContractionClass::orbital, 3, false},
        {ContractionClass::kannan, 3, false},  {ContractionClass::chatterjea, 3, false},
        {ContractionClass::kannan, 3, true}};
    for (const auto& [klass, n, no_period_two] : runs) {
        std::vector<Instance> sample;
        const auto scanned = collect(
            100, 400000,
            [&](std::uint64_t i) { return candidate(80 + static_cast<std::uint64_t>(klass), i, std::max<std::size_t>(n, 3), 8); },
            [&](const Instance& inst) {
                const auto c = certify(inst.space, inst.map, klass, n);
                return c.certified && !c.domain_empty && c.tightest.has_value() &&
                       (!no_period_two || periodic_points(inst.map, 2).empty());
            },
            sample);
        std::size_t links = 0;
        std::size_t link_failures = 0;
        std::size_t traces = 0;
        std::size_t bounded = 0;
        std::size_t bound_failures = 0;
        std::size_t chain_broken = 0;
        double worst_excess = 0.0;
        std::size_t alt_failures = 0;
        std::size_t clean_failures = 0;  // on maps without prime-period-2 points
        std::optional<Instance> smallest;
        const RateLawOptions opts{n, ChatterjeaDomain::restricted, kTol};
        for (std::size_t s = 0; s < sample.size(); ++s) {
            const auto& inst = sample[s];
            const auto cert = certify(inst.space, inst.map, klass, n);
            const double rate = *certified_rate(cert);
            for (Index x0 = 0; x0 < inst.space.size(); ++x0) {
                for (auto policy : {SelectionPolicy::first_index(), SelectionPolicy::nearest(),
                                    SelectionPolicy::farthest(), SelectionPolicy::seeded_random(s * 131 + x0)}) {
                    const auto tr = picard_iterate(inst.space, inst.map, x0, policy, 4 * inst.space.size());
                    ++traces;
                    for (const auto& l : rate_law(klass, inst.space, inst.map, tr, rate, opts)) {
                        if (!l.in_domain) continue;
                        ++links;
                        if (!l.holds) {
                            ++link_failures;
                            worst_excess = std::max(worst_excess, l.after - rate * l.before);
                            if (!smallest || inst.space.size() < smallest->space.size()) smallest = inst;
                            if (periodic_points(inst.map, 2).empty()) ++clean_failures;
                        }
                    }
                    if (klass == ContractionClass::kannan) {
                        const double beta = *cert.tightest;
                        for (const auto& l : rate_law(klass, inst.space, inst.map, tr, beta / (2.0 - 2.0 * beta), opts)) {
                            alt_failures += (l.in_domain && !l.holds) ? 1 : 0;
                        }
                    }
                    if (tr.outcome.kind == Outcome::Kind::fixed_point && tr.points.size() >= 2) {
                        try {
                            const auto b = bound_domination(klass, inst.space, inst.map, tr, rate, opts);
                            if (!b.chain_valid) {
                                ++chain_broken;
                                continue;
                            }
                            ++bounded;
                            bound_failures += b.dominated ? 0 : 1;
                        } catch (const TraceTooShort&) {
                            // Windows longer than the trace prefix: no p.
                        }
                    }
                }
            }
        }
        std::string name(to_string(klass));
        if (klass == ContractionClass::total_pairwise) name += "(" + std::to_string(n) + ")";
        if (no_period_two) name = "8b rate law " + name + ", no prime-period-2 points";
        else name = "8 rate law " + name;
        report(name, sample.size() == 100 && link_failures == 0 && bound_failures == 0,
               std::to_string(sample.size()) + " certified (" + std::to_string(scanned) + " scanned), " +
                   std::to_string(traces) + " traces, " + std::to_string(links) + " in-domain links, " +
                   std::to_string(link_failures) + " violations" +
                   (link_failures ? " (worst excess " + fmt(worst_excess, 6) + ")" : "") + "; " +
                   std::to_string(bounded) + " bound checks, " + std::to_string(bound_failures) + " violations, " +
                   std::to_string(chain_broken) + " skipped (chain leaves the domain)");
        if (klass == ContractionClass::kannan && !no_period_two) {
            note("with rate beta/(2-2beta) instead: " + std::to_string(alt_failures) + " violations");
            note("violations on maps without prime-period-2 points: " + std::to_string(clean_failures));
            if (smallest) note("smallest violating instance: " + io::to_json(*smallest).dump());
        }
    }
    note("8 total " + fmt(clock.seconds()) + " s");
}

void criterion_9()
{
    Clock clock;
    std::mt19937_64 rng(9);
    std::size_t disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        GenConfig g;
        g.point_count = 2 + rng() % 9;
        g.flavor.kind = SpaceFlavor::Kind::line;
        g.map_flavor.kind = MapFlavor::Kind::uniform_random;
        g.map_flavor.max_image = 1 + rng() % 4;
        g.seed = rng();
        const auto inst = generate(g);
        const auto& t = inst.map;
        if (brute_fixed_points(t) != fixed_points(t)) ++disagreements;
        const auto periodic = brute_periodic(t, t.size());
        for (std::size_t k = 1; k <= t.size(); ++k) {
            if (periodic.at(k) != periodic_points(t, k)) ++disagreements;
        }
    }
    report("9 oracle equivalence", disagreements == 0,
           "1000 multimaps, " + std::to_string(disagreements) + " disagreements, " + fmt(clock.seconds()) + " s");
}

void criterion_10()
{
    Clock clock;
    std::size_t mismatches = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto inst = candidate(10, i, 4, 10);
        std::string reference;
        for (unsigned w : {1u, 2u, 8u}) {
            std::string dump;
            for (auto klass : {ContractionClass::banach, ContractionClass::perimeter, ContractionClass::total_pairwise,
                               ContractionClass::orbital, ContractionClass::kannan, ContractionClass::chatterjea}) {
                dump += io::to_json(certify(inst.space, inst.map, klass, 4, {w})).dump();
            }
            ValidateOptions vo;
            vo.workers = w;
            dump += io::to_json(validate(inst, TheoremId::T3_5_periodic_exists, vo)).dump();
            if (w == 1) {
                reference = dump;
            } else if (dump != reference) {
                ++mismatches;
            }
        }
    }
    for (auto theorem : {TheoremId::T3_5_periodic_exists, TheoremId::C3_11_multi_perimeter_iff, TheoremId::P3_4_upward}) {
        GenConfig g;
        g.point_count = 4;
        g.point_count_max = 8;
        g.map_flavor.kind = MapFlavor::Kind::hub;
        g.map_flavor.spread = 2;
        SweepConfig sc{g, theorem, 50, 10, {}, 1};
        const auto reference = io::to_json(sweep(sc)).dump();
        for (unsigned w : {2u, 8u}) {
            sc.workers = w;
            if (io::to_json(sweep(sc)).dump() != reference) ++mismatches;
        }
    }
    report("10 determinism", mismatches == 0,
           "50 instances and 3 sweeps at 1/2/8 workers, " + std::to_string(mismatches) + " mismatches, " +
               fmt(clock.seconds()) + " s");
}

} // namespace

int main()
{
    Clock total;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::cout << g_failed << " failed, total " << fmt(total.seconds()) << " s" << std::endl;
    return g_failed == 0 ? 0 : 1;
}
