#pragma once

// Multivalued Picard iteration x_{i+1} in T(x_i) with pluggable selection,
// plus the geometric error bounds that accompany each contraction class.

#include "mvfix/certification.hpp"
#include "mvfix/mappings.hpp"
#include "mvfix/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mvfix {

struct SelectionPolicy {
    enum class Kind { first_index, nearest, farthest, seeded_random };

    Kind kind = Kind::first_index;
    std::uint64_t seed = 0;  ///< read only by seeded_random

    static SelectionPolicy first_index() { return {Kind::first_index, 0}; }
    static SelectionPolicy nearest() { return {Kind::nearest, 0}; }
    static SelectionPolicy farthest() { return {Kind::farthest, 0}; }
    static SelectionPolicy seeded_random(std::uint64_t seed) { return {Kind::seeded_random, seed}; }

    bool deterministic() const { return kind != Kind::seeded_random; }

    friend bool operator==(const SelectionPolicy&, const SelectionPolicy&) = default;
};

std::string_view to_string(SelectionPolicy::Kind kind);
SelectionPolicy::Kind parse_policy_kind(std::string_view name);

struct Outcome {
    enum class Kind { fixed_point, cycle, step_limit };

    Kind kind = Kind::step_limit;
    Index point = 0;         ///< fixed_point
    Index start = 0;         ///< cycle: index into the trace where the cycle starts
    std::size_t length = 0;  ///< cycle

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string_view to_string(Outcome::Kind kind);

struct OrbitTrace {
    std::vector<Index> points;
    std::vector<double> step_dists;
    Outcome outcome;
    std::size_t steps_taken = 0;
    SelectionPolicy policy;

    friend bool operator==(const OrbitTrace&, const OrbitTrace&) = default;
};

/// Iterates from x0 until the current point lies in its own image
/// (fixed_point), a state repeats (cycle), or max_steps selections have been
/// made (step_limit). Deterministic policies detect repeats on points;
/// seeded_random detects them on (point, generator state) pairs.
OrbitTrace picard_iterate(const MetricSpaceD& space, const MultiMap& t, Index x0, SelectionPolicy policy,
                          std::size_t max_steps);

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class TraceTooShort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-step contraction rate implied by a class constant:
/// kannan beta -> beta/(2-beta), chatterjea gamma -> gamma/(1-gamma),
/// every other class passes its constant through.
double effective_rate(ContractionClass c, double constant);

/// Rate for a certified certificate. A Chatterjea tightest of exactly 0
/// admits every gamma in (0, 1/2), so the rate is the limit 0. Returns
/// nullopt when the certificate is not certified or has no tightest value.
std::optional<double> certified_rate(const Certificate& cert);

/// i-th point of the orbit the trace determines. After a fixed point the
/// orbit may stay put (x* in Tx*); after a cycle it keeps cycling. Past a
/// step_limit nothing is known.
std::optional<Index> orbit_point(const OrbitTrace& trace, std::size_t i);

/// The quantity the class's chain contracts at orbit position k:
/// d(x_k, x_{k+1}) for banach and kannan, S(x_k, ..., x_{k+n-1}) for
/// total_pairwise (n = 3 for perimeter), the triangle perimeter of
/// (x_k, x_{k+1}, x_{k+2}) for orbital and chatterjea.
std::optional<double> chain_quantity(ContractionClass c, const MetricSpaceD& space, const OrbitTrace& trace,
                                     std::size_t k, std::size_t n_for_S);

/// p for the class, computed from the head of the trace (chain_quantity at 0).
double initial_quantity_p(ContractionClass c, const MetricSpaceD& space, const MultiMap& t, const OrbitTrace& trace,
                          std::size_t n_for_S);

/// rate^n * p / (1 - rate).
double a_priori_bound(double rate, double p, std::size_t n);

/// Smallest n with a_priori_bound(rate, p, n) <= eps.
std::size_t required_steps(double rate, double p, double eps);

/// One link Q_{k+1} <= rate * Q_k of a class chain along a trace.
struct RateLawLink {
    std::size_t index = 0;  ///< k
    bool in_domain = false; ///< the tuple the link uses lies in the class domain
    double before = 0.0;    ///< Q_k
    double after = 0.0;     ///< Q_{k+1}
    bool holds = false;     ///< after <= rate * before + slack

    friend bool operator==(const RateLawLink&, const RateLawLink&) = default;
};

struct RateLawOptions {
    std::size_t n_for_S = 3;
    ChatterjeaDomain chatterjea_domain = ChatterjeaDomain::restricted;
    double slack = kDefaultSlack;
};

/// Evaluates every chain link whose points the trace determines, for link
/// indices k below the last recorded point.
std::vector<RateLawLink> rate_law(ContractionClass c, const MetricSpaceD& space, const MultiMap& t,
                                  const OrbitTrace& trace, double rate, const RateLawOptions& opts = {});

struct BoundReport {
    std::vector<double> bounds;     ///< a_priori_bound(rate, p, n) per recorded point
    std::vector<double> distances;  ///< d(x_n, x*) per recorded point
    bool chain_valid = false;       ///< every link needed for the bound lies in the class domain
    bool dominated = false;         ///< distances[n] <= bounds[n] + slack for all n
};

/// Compares the a priori bound against the observed distance to the
/// terminal fixed point. Throws TraceTooShort unless the trace ends in a
/// fixed point.
BoundReport bound_domination(ContractionClass c, const MetricSpaceD& space, const MultiMap& t, const OrbitTrace& trace,
                             double rate, const RateLawOptions& opts = {});

} // namespace mvfix
