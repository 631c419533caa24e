#pragma once

// Exhaustive membership checks for the contraction classes. Each check
// computes the tightest admissible constant over the class's tuple domain
// together with a witness tuple that realizes it.

#include "mvfix/mappings.hpp"
#include "mvfix/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvfix {

enum class ContractionClass { banach, perimeter, total_pairwise, orbital, kannan, chatterjea };

/// Which ordered pairs the Chatterjea inequality ranges over. Restricted
/// uses the Kannan domain (x != y, x not in Tx, y not in Tx); unrestricted
/// takes every ordered pair, x == y included.
enum class ChatterjeaDomain { restricted, unrestricted };

std::string_view to_string(ContractionClass c);
std::string_view to_string(ChatterjeaDomain d);
ContractionClass parse_contraction_class(std::string_view name);
ChatterjeaDomain parse_chatterjea_domain(std::string_view name);

/// Supremum of the admissible constant range: 1, 1, 1, 1, 2/3, 1/2.
double admissible_sup(ContractionClass c);

class SpaceTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CertifyOptions {
    unsigned workers = 1;          ///< 0 selects hardware concurrency
    double slack = kDefaultSlack;  ///< ignored on integral spaces
    ChatterjeaDomain chatterjea_domain = ChatterjeaDomain::restricted;
};

struct Certificate {
    ContractionClass klass = ContractionClass::banach;
    /// Tuple size: 2 for banach, 3 for perimeter, n for total_pairwise, 2 for the orbital family.
    std::size_t arity = 2;
    /// Number of distinct points per tuple when tuples with repeats were enumerated; 0 otherwise.
    std::size_t distinct = 0;
    /// Unset when no tuple had a positive right-hand side; +infinity when some
    /// tuple had a zero right-hand side but a positive left-hand side.
    std::optional<double> tightest;
    double admissible_sup = 1.0;
    bool strict_positive_lower = false;
    bool certified = false;
    std::vector<Index> witness;
    std::uint64_t tuples_examined = 0;
    std::uint64_t skipped_zero_zero = 0;
    bool domain_empty = false;
    bool below_cardinality_bound = false;
    std::optional<ChatterjeaDomain> chatterjea_domain;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

Certificate certify_banach(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts = {});
Certificate certify_perimeter(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts = {});
Certificate certify_total_pairwise(const MetricSpaceD& space, const MultiMap& t, std::size_t n,
                                   const CertifyOptions& opts = {});
Certificate certify_orbital(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts = {});
Certificate certify_kannan(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts = {});
Certificate certify_chatterjea(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts = {});

/// The n-point total pairwise inequality restricted to n-tuples (multisets)
/// with exactly k distinct points, 2 <= k <= n - 1. Repeated points keep
/// their delta(Tx, Tx) = diam(Tx) terms. This is the hypothesis under which
/// contraction at n passes down to contraction at k.
Certificate certify_total_pairwise_with_repeats(const MetricSpaceD& space, const MultiMap& t, std::size_t n,
                                                std::size_t k, const CertifyOptions& opts = {});

/// Dispatches on the class; n is only read for total_pairwise.
Certificate certify(const MetricSpaceD& space, const MultiMap& t, ContractionClass c, std::size_t n = 3,
                    const CertifyOptions& opts = {});

/// Smallest space size the class checker accepts.
std::size_t minimum_points(ContractionClass c, std::size_t n = 3);

bool in_orbital_domain(const MultiMap& t, Index x, Index y);
bool in_kannan_domain(const MultiMap& t, Index x, Index y);
bool in_chatterjea_domain(const MultiMap& t, Index x, Index y, ChatterjeaDomain domain);

/// True iff no point has prime period 2.
bool no_period2(const MultiMap& t);

/// T(T(x)) != x whenever Tx != x.
bool condition_i(const SingleMap& t);

} // namespace mvfix
