#include "mvfix/certification.hpp"

#include "mvfix/parallel.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace mvfix {

std::string_view to_string(ContractionClass c)
{
    switch (c) {
    case ContractionClass::banach: return "banach";
    case ContractionClass::perimeter: return "perimeter";
    case ContractionClass::total_pairwise: return "total_pairwise";
    case ContractionClass::orbital: return "orbital";
    case ContractionClass::kannan: return "kannan";
    case ContractionClass::chatterjea: return "chatterjea";
    }
    return "unknown";
}

std::string_view to_string(ChatterjeaDomain d)
{
    return d == ChatterjeaDomain::restricted ? "restricted" : "unrestricted";
}

ContractionClass parse_contraction_class(std::string_view name)
{
    for (auto c : {ContractionClass::banach, ContractionClass::perimeter, ContractionClass::total_pairwise,
                   ContractionClass::orbital, ContractionClass::kannan, ContractionClass::chatterjea}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw std::invalid_argument("unknown contraction class '" + std::string(name) + "'");
}

ChatterjeaDomain parse_chatterjea_domain(std::string_view name)
{
    if (name == "restricted") {
        return ChatterjeaDomain::restricted;
    }
    if (name == "unrestricted") {
        return ChatterjeaDomain::unrestricted;
    }
    throw std::invalid_argument("unknown Chatterjea domain '" + std::string(name) + "'");
}

double admissible_sup(ContractionClass c)
{
    switch (c) {
    case ContractionClass::kannan: return 2.0 / 3.0;
    case ContractionClass::chatterjea: return 0.5;
    default: return 1.0;
    }
}

std::size_t minimum_points(ContractionClass c, std::size_t n)
{
    switch (c) {
    case ContractionClass::perimeter: return 3;
    case ContractionClass::total_pairwise: return n;
    default: return 2;
    }
}

bool in_orbital_domain(const MultiMap& t, Index x, Index y)
{
    return x != y && !t(x).contains(y);
}

bool in_kannan_domain(const MultiMap& t, Index x, Index y)
{
    const auto& tx = t(x);
    return x != y && !tx.contains(x) && !tx.contains(y);
}

bool in_chatterjea_domain(const MultiMap& t, Index x, Index y, ChatterjeaDomain domain)
{
    return domain == ChatterjeaDomain::unrestricted || in_kannan_domain(t, x, y);
}

bool no_period2(const MultiMap& t)
{
    return periodic_points(t, 2).empty();
}

bool condition_i(const SingleMap& t)
{
    for (Index x = 0; x < t.size(); ++x) {
        if (t(x) != x && t(t(x)) == x) {
            return false;
        }
    }
    return true;
}

namespace {

/// Running maximum of LHS/RHS with a lexicographically smallest witness.
/// Merging is associative and commutative, so any partition of the tuples
/// yields the same result.
struct Extremum {
    bool any = false;
    double best = 0.0;
    std::vector<Index> witness;
    std::uint64_t examined = 0;
    std::uint64_t skipped = 0;

    void consider(double ratio, std::span<const Index> tuple)
    {
        if (!any || ratio > best ||
            (ratio == best && std::lexicographical_compare(tuple.begin(), tuple.end(), witness.begin(), witness.end()))) {
            any = true;
            best = ratio;
            witness.assign(tuple.begin(), tuple.end());
        }
    }

    void offer(double lhs, double rhs, std::span<const Index> tuple)
    {
        ++examined;
        if (rhs > 0.0) {
            consider(lhs / rhs, tuple);
        } else if (lhs > 0.0) {
            consider(std::numeric_limits<double>::infinity(), tuple);
        } else {
            ++skipped;
        }
    }

    void merge(const Extremum& other)
    {
        examined += other.examined;
        skipped += other.skipped;
        if (other.any) {
            consider(other.best, other.witness);
        }
    }
};

Certificate finish(const MetricSpaceD& space, ContractionClass klass, std::size_t arity, const Extremum& ext,
                   const CertifyOptions& opts)
{
    Certificate c;
    c.klass = klass;
    c.arity = arity;
    c.admissible_sup = admissible_sup(klass);
    c.strict_positive_lower = klass == ContractionClass::chatterjea;
    c.tuples_examined = ext.examined;
    c.skipped_zero_zero = ext.skipped;
    c.domain_empty = ext.examined == 0;
    if (ext.any) {
        c.tightest = ext.best;
        c.witness = ext.witness;
    }
    if (klass == ContractionClass::chatterjea) {
        c.chatterjea_domain = opts.chatterjea_domain;
    }
    if (!ext.any) {
        c.certified = true;
    } else {
        c.certified = ext.best < c.admissible_sup - space.ratio_slack(opts.slack);
    }
    return c;
}

/// delta(T x_i, T x_j) for every pair of points.
Eigen::MatrixXd image_deltas(const MetricSpaceD& space, const MultiMap& t)
{
    const auto n = static_cast<Eigen::Index>(space.size());
    Eigen::MatrixXd deltas(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            deltas(i, j) = delta_distance(space, t(static_cast<Index>(i)), t(static_cast<Index>(j)));
            deltas(j, i) = deltas(i, j);
        }
    }
    return deltas;
}

/// Calls fn on every increasing k-tuple drawn from [0, n) whose first entry is `first`.
void for_each_subset_from(std::size_t n, std::size_t k, Index first, const std::function<void(std::span<const Index>)>& fn)
{
    std::vector<Index> tuple(k);
    tuple[0] = first;
    if (k == 1) {
        fn(tuple);
        return;
    }
    // Remaining k-1 entries chosen from (first, n).
    for (std::size_t i = 1; i < k; ++i) {
        tuple[i] = first + i;
    }
    if (tuple[k - 1] >= n) {
        return;
    }
    while (true) {
        fn(tuple);
        std::size_t pos = k - 1;
        while (pos >= 1 && tuple[pos] == n - k + pos) {
            --pos;
        }
        if (pos == 0) {
            return;
        }
        ++tuple[pos];
        for (std::size_t i = pos + 1; i < k; ++i) {
            tuple[i] = tuple[i - 1] + 1;
        }
    }
}

/// Calls fn on every composition of `total` into `parts` positive integers, lexicographically descending in
/// the first part so that the expanded tuples come out in lexicographic order.
void for_each_composition(std::size_t total, std::size_t parts, std::vector<std::size_t>& acc,
                          const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    if (parts == 1) {
        acc.push_back(total);
        fn(acc);
        acc.pop_back();
        return;
    }
    for (std::size_t first = total - parts + 1; first >= 1; --first) {
        acc.push_back(first);
        for_each_composition(total - first, parts - 1, acc, fn);
        acc.pop_back();
    }
}

void offer_tuple(Extremum& ext, const MetricSpaceD& space, const Eigen::MatrixXd& deltas, std::span<const Index> tuple)
{
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            lhs += deltas(static_cast<Eigen::Index>(tuple[i]), static_cast<Eigen::Index>(tuple[j]));
            rhs += space(tuple[i], tuple[j]);
        }
    }
    ext.offer(lhs, rhs, tuple);
}

Extremum reduce(std::vector<Extremum>& partial)
{
    Extremum total;
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total;
}

void require_points(const MetricSpaceD& space, const MultiMap& t, std::size_t needed, std::string_view what)
{
    require_same_size(space, t);
    if (space.size() < needed) {
        throw SpaceTooSmall(std::string(what) + " certification needs at least " + std::to_string(needed) +
                            " points, space has " + std::to_string(space.size()));
    }
}

Certificate certify_subsets(const MetricSpaceD& space, const MultiMap& t, ContractionClass klass, std::size_t n,
                            const CertifyOptions& opts)
{
    const auto deltas = image_deltas(space, t);
    const std::size_t points = space.size();
    const unsigned workers = opts.workers == 0 ? default_workers() : opts.workers;
    std::vector<Extremum> partial(workers);
    parallel_for(points, workers, [&](unsigned w, std::size_t first) {
        for_each_subset_from(points, n, first, [&](std::span<const Index> tuple) {
            offer_tuple(partial[w], space, deltas, tuple);
        });
    });
    return finish(space, klass, n, reduce(partial), opts);
}

/// Per-point quantities shared by the orbital family.
struct OrbitData {
    std::vector<PointSet> second;    // T^2 x
    std::vector<double> to_image;    // d(x, Tx)
    std::vector<double> to_second;   // d(x, T^2 x)
    std::vector<double> image_step;  // delta(Tx, T^2 x)
};

OrbitData orbit_data(const MetricSpaceD& space, const MultiMap& t)
{
    OrbitData data;
    for (Index x = 0; x < space.size(); ++x) {
        data.second.push_back(power_image(t, x, 2));
        data.to_image.push_back(point_set_distance(space, x, t(x)));
        data.to_second.push_back(point_set_distance(space, x, data.second.back()));
        data.image_step.push_back(delta_distance(space, t(x), data.second.back()));
    }
    return data;
}

template <typename InDomain, typename Sides>
Certificate certify_pairs(const MetricSpaceD& space, const MultiMap& t, ContractionClass klass,
                          const CertifyOptions& opts, InDomain in_domain, Sides sides)
{
    const auto deltas = image_deltas(space, t);
    const auto data = orbit_data(space, t);
    const std::size_t points = space.size();
    const unsigned workers = opts.workers == 0 ? default_workers() : opts.workers;
    std::vector<Extremum> partial(workers);
    parallel_for(points, workers, [&](unsigned w, std::size_t x) {
        for (Index y = 0; y < points; ++y) {
            if (!in_domain(x, y)) {
                continue;
            }
            // Common left-hand side: delta(Tx,T^2x) + delta(T^2x,Ty) + delta(Ty,Tx).
            const double lhs = data.image_step[x] + delta_distance(space, data.second[x], t(y)) +
                               deltas(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
            const Index tuple[2] = {x, y};
            partial[w].offer(lhs, sides(data, deltas, x, y), tuple);
        }
    });
    return finish(space, klass, 2, reduce(partial), opts);
}

} // namespace

Certificate certify_banach(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts)
{
    require_points(space, t, 2, "banach");
    return certify_subsets(space, t, ContractionClass::banach, 2, opts);
}

Certificate certify_perimeter(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts)
{
    require_points(space, t, 3, "perimeter");
    auto c = certify_subsets(space, t, ContractionClass::perimeter, 3, opts);
    c.below_cardinality_bound = space.size() <= 3;
    return c;
}

Certificate certify_total_pairwise(const MetricSpaceD& space, const MultiMap& t, std::size_t n,
                                   const CertifyOptions& opts)
{
    if (n < 2) {
        throw std::invalid_argument("total pairwise certification needs n >= 2");
    }
    require_points(space, t, n, "total_pairwise(" + std::to_string(n) + ")");
    return certify_subsets(space, t, ContractionClass::total_pairwise, n, opts);
}

Certificate certify_total_pairwise_with_repeats(const MetricSpaceD& space, const MultiMap& t, std::size_t n,
                                                std::size_t k, const CertifyOptions& opts)
{
    if (k < 2 || k >= n) {
        throw std::invalid_argument("repeated-tuple certification needs 2 <= k < n");
    }
    require_points(space, t, k, "total_pairwise(" + std::to_string(n) + ") with repeats");
    const auto deltas = image_deltas(space, t);
    const std::size_t points = space.size();
    const unsigned workers = opts.workers == 0 ? default_workers() : opts.workers;
    std::vector<Extremum> partial(workers);
    parallel_for(points, workers, [&](unsigned w, std::size_t first) {
        std::vector<std::size_t> acc;
        std::vector<Index> tuple;
        for_each_subset_from(points, k, first, [&](std::span<const Index> distinct) {
            for_each_composition(n, k, acc, [&](const std::vector<std::size_t>& counts) {
                tuple.clear();
                for (std::size_t i = 0; i < k; ++i) {
                    tuple.insert(tuple.end(), counts[i], distinct[i]);
                }
                offer_tuple(partial[w], space, deltas, tuple);
            });
        });
    });
    auto c = finish(space, ContractionClass::total_pairwise, n, reduce(partial), opts);
    c.distinct = k;
    return c;
}

Certificate certify_orbital(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts)
{
    require_points(space, t, 2, "orbital");
    return certify_pairs(
        space, t, ContractionClass::orbital, opts, [&](Index x, Index y) { return in_orbital_domain(t, x, y); },
        [&](const OrbitData& data, const Eigen::MatrixXd&, Index x, Index y) {
            // d(x,Tx) + d(Tx,y) + d(x,y)
            return data.to_image[x] + point_set_distance(space, y, t(x)) + space(x, y);
        });
}

Certificate certify_kannan(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts)
{
    require_points(space, t, 2, "kannan");
    return certify_pairs(
        space, t, ContractionClass::kannan, opts, [&](Index x, Index y) { return in_kannan_domain(t, x, y); },
        [](const OrbitData& data, const Eigen::MatrixXd&, Index x, Index y) {
            // d(x,Tx) + d(y,Ty) + delta(Tx,T^2x)
            return data.to_image[x] + data.to_image[y] + data.image_step[x];
        });
}

Certificate certify_chatterjea(const MetricSpaceD& space, const MultiMap& t, const CertifyOptions& opts)
{
    require_points(space, t, 2, "chatterjea");
    const auto domain = opts.chatterjea_domain;
    return certify_pairs(
        space, t, ContractionClass::chatterjea, opts,
        [&](Index x, Index y) { return in_chatterjea_domain(t, x, y, domain); },
        [&](const OrbitData& data, const Eigen::MatrixXd& deltas, Index x, Index y) {
            // d(x,Ty) + d(y,Tx) + d(x,T^2x) + d(y,T^2x) + delta(Tx,Ty)
            return point_set_distance(space, x, t(y)) + point_set_distance(space, y, t(x)) + data.to_second[x] +
                   point_set_distance(space, y, data.second[x]) +
                   deltas(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        });
}

Certificate certify(const MetricSpaceD& space, const MultiMap& t, ContractionClass c, std::size_t n,
                    const CertifyOptions& opts)
{
    switch (c) {
    case ContractionClass::banach: return certify_banach(space, t, opts);
    case ContractionClass::perimeter: return certify_perimeter(space, t, opts);
    case ContractionClass::total_pairwise: return certify_total_pairwise(space, t, n, opts);
    case ContractionClass::orbital: return certify_orbital(space, t, opts);
    case ContractionClass::kannan: return certify_kannan(space, t, opts);
    case ContractionClass::chatterjea: return certify_chatterjea(space, t, opts);
    }
    throw std::invalid_argument("unknown contraction class");
}

} // namespace mvfix
