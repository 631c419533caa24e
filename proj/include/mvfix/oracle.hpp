#pragma once

// Brute-force ground truth and per-theorem validation. The scans here do
// not call into mappings, so agreement with it is independent evidence.

#include "mvfix/certification.hpp"
#include "mvfix/generators.hpp"
#include "mvfix/instance.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace mvfix {

enum class TheoremId {
    T2_4_two_fixed_points,
    T3_5_periodic_exists,
    C3_10_single_perimeter_iff,
    C3_11_multi_perimeter_iff,
    T4_3_orbital_fixed,
    T5_4_kannan_fixed,
    T6_4_chatterjea_fixed,
    C_banach_unique,
    P3_3_downward,
    P3_4_upward,
};

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view name);
const std::vector<TheoremId>& all_theorems();

enum class Verdict { validated, hypothesis_not_met, counterexample };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view name);

class CardinalityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ValidateOptions {
    /// Point count n for T3_5 and P3_3, m for P3_4; 0 picks 3, 4 and 2 respectively.
    std::size_t n = 0;
    /// Largest n checked by P3_4; 0 means the space size.
    std::size_t n_max = 0;
    ChatterjeaDomain chatterjea_domain = ChatterjeaDomain::restricted;
    double slack = kDefaultSlack;
    unsigned workers = 1;

    friend bool operator==(const ValidateOptions&, const ValidateOptions&) = default;
};

struct Evidence {
    std::vector<Certificate> certificates;
    std::vector<Index> fixed_points;
    std::map<std::size_t, std::vector<Index>> periodic;
    std::size_t n = 0;
    std::optional<Instance> instance;  ///< present for counterexamples

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct ValidationReport {
    TheoremId theorem = TheoremId::T3_5_periodic_exists;
    bool hypothesis_held = false;
    bool conclusion_held = false;
    Verdict verdict = Verdict::hypothesis_not_met;
    Evidence evidence;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// {x : x in T(x)} by linear membership scan.
std::vector<Index> brute_fixed_points(const MultiMap& t);

/// Prime-period-k points for k = 1..k_max from boolean walk-count matrices:
/// x has prime period k when the first closed walk at x has length k.
std::map<std::size_t, std::vector<Index>> brute_periodic(const MultiMap& t, std::size_t k_max);

/// Checks the theorem's hypothesis with the certification module and its
/// conclusion with the brute-force oracles. Throws CardinalityError when the
/// space is below the theorem's size requirement.
ValidationReport validate(const Instance& instance, TheoremId theorem, const ValidateOptions& opts = {});

struct SweepConfig {
    GenConfig gen;
    TheoremId theorem = TheoremId::T3_5_periodic_exists;
    std::size_t instance_count = 1;
    std::uint64_t seed = 0;  ///< per-instance seeds derive from (seed, index)
    ValidateOptions validate;
    unsigned workers = 1;
};

struct SweepSummary {
    std::size_t validated = 0;
    std::size_t hypothesis_not_met = 0;
    std::size_t counterexamples = 0;
    std::size_t below_cardinality = 0;
    std::vector<ValidationReport> reports;  ///< counterexample reports, in instance order

    friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

/// Generates instance_count instances and validates each. Instances too
/// small for the theorem are counted and skipped. Output does not depend on
/// the worker count.
SweepSummary sweep(const SweepConfig& config);

} // namespace mvfix
