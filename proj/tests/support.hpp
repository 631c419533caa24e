#pragma once

// Test helpers and independent brute-force oracles. Nothing here calls into
// the certification or mappings code it is used to check.

#include "mvfix/generators.hpp"
#include "mvfix/mappings.hpp"
#include "mvfix/metric_space.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace mvfix::test {

using Targets = std::vector<std::vector<Index>>;

inline MultiMap multimap(const Targets& targets)
{
    std::vector<PointSet> sets;
    for (const auto& t : targets) {
        sets.emplace_back(t);
    }
    return MultiMap(std::move(sets));
}

/// Points at the given positions on the real line.
inline MetricSpaceD line_at(std::initializer_list<double> positions)
{
    const std::vector<double> p(positions);
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            d(i, j) = std::abs(p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)]);
        }
    }
    return validate_metric(d);
}

inline MetricSpaceD equilateral(std::size_t n, double side = 1.0)
{
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(m, m, side);
    d.diagonal().setZero();
    return validate_metric(d);
}

inline MultiMap constant_map(std::size_t n, Index h)
{
    return MultiMap(std::vector<PointSet>(n, PointSet::singleton(h)));
}

inline MultiMap identity_map(std::size_t n)
{
    std::vector<PointSet> sets;
    for (Index i = 0; i < n; ++i) {
        sets.push_back(PointSet::singleton(i));
    }
    return MultiMap(std::move(sets));
}

// ---- brute-force oracle --------------------------------------------------

struct Oracle {
    const MetricSpaceD& space;
    const MultiMap& t;

    double d(Index a, Index b) const { return space(a, b); }

    double delta(const std::vector<Index>& a, const std::vector<Index>& b) const
    {
        double best = 0.0;
        for (Index x : a) {
            for (Index y : b) {
                best = std::max(best, d(x, y));
            }
        }
        return best;
    }

    double dist_to(Index x, const std::vector<Index>& a) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (Index y : a) {
            best = std::min(best, d(x, y));
        }
        return best;
    }

    std::vector<Index> img(Index x) const
    {
        const auto m = t(x).members();
        return {m.begin(), m.end()};
    }

    std::vector<Index> img2(Index x) const
    {
        std::set<Index> out;
        for (Index y : img(x)) {
            for (Index z : img(y)) {
                out.insert(z);
            }
        }
        return {out.begin(), out.end()};
    }

    static bool has(const std::vector<Index>& a, Index x) { return std::find(a.begin(), a.end(), x) != a.end(); }
};

/// Result of a naive max-ratio scan.
struct RatioScan {
    std::optional<double> tightest;
    std::size_t examined = 0;
    std::size_t zero_zero = 0;

    void offer(double lhs, double rhs)
    {
        ++examined;
        double r;
        if (rhs > 0.0) {
            r = lhs / rhs;
        } else if (lhs > 0.0) {
            r = std::numeric_limits<double>::infinity();
        } else {
            ++zero_zero;
            return;
        }
        if (!tightest || r > *tightest) {
            tightest = r;
        }
    }
};

/// Max over n-subsets of S(Tx_1..Tx_n)/S(x_1..x_n), by recursive choice.
inline RatioScan oracle_total_pairwise(const MetricSpaceD& space, const MultiMap& t, std::size_t n)
{
    Oracle o{space, t};
    RatioScan scan;
    std::vector<Index> pick;
    auto rec = [&](auto&& self, Index from) -> void {
        if (pick.size() == n) {
            double lhs = 0.0;
            double rhs = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    lhs += o.delta(o.img(pick[i]), o.img(pick[j]));
                    rhs += o.d(pick[i], pick[j]);
                }
            }
            scan.offer(lhs, rhs);
            return;
        }
        for (Index x = from; x < space.size(); ++x) {
            pick.push_back(x);
            self(self, x + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return scan;
}

inline double orbital_lhs(const Oracle& o, Index x, Index y)
{
    const auto tx = o.img(x);
    const auto t2x = o.img2(x);
    const auto ty = o.img(y);
    return o.delta(tx, t2x) + o.delta(t2x, ty) + o.delta(ty, tx);
}

enum class Family { orbital, kannan, chatterjea_restricted, chatterjea_unrestricted };

inline RatioScan oracle_family(const MetricSpaceD& space, const MultiMap& t, Family f)
{
    Oracle o{space, t};
    RatioScan scan;
    for (Index x = 0; x < space.size(); ++x) {
        for (Index y = 0; y < space.size(); ++y) {
            const auto tx = o.img(x);
            const auto t2x = o.img2(x);
            const auto ty = o.img(y);
            const bool base = x != y && !Oracle::has(tx, y);
            const bool strict = base && !Oracle::has(tx, x);
            double rhs = 0.0;
            switch (f) {
            case Family::orbital:
                if (!base) continue;
                rhs = o.dist_to(x, tx) + o.dist_to(y, tx) + o.d(x, y);
                break;
            case Family::kannan:
                if (!strict) continue;
                rhs = o.dist_to(x, tx) + o.dist_to(y, ty) + o.delta(tx, t2x);
                break;
            case Family::chatterjea_restricted:
            case Family::chatterjea_unrestricted:
                if (f == Family::chatterjea_restricted && !strict) continue;
                rhs = o.dist_to(x, ty) + o.dist_to(y, tx) + o.dist_to(x, t2x) + o.dist_to(y, t2x) + o.delta(tx, ty);
                break;
            }
            scan.offer(orbital_lhs(o, x, y), rhs);
        }
    }
    return scan;
}

/// Independent prime-period computation by repeated set images.
inline std::optional<std::size_t> oracle_prime_period(const MultiMap& t, Index x, std::size_t k_max)
{
    std::set<Index> cur{x};
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::set<Index> next;
        for (Index y : cur) {
            for (Index z : t(y).members()) {
                next.insert(z);
            }
        }
        if (next.count(x) != 0) {
            return k;
        }
        cur = std::move(next);
    }
    return std::nullopt;
}

/// Random instance drawn from a mix of generators, for property loops.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n_min, std::size_t n_max, std::size_t max_image)
{
    GenConfig g;
    g.point_count = std::uniform_int_distribution<std::size_t>(n_min, n_max)(rng);
    const int flavor = std::uniform_int_distribution<int>(0, 2)(rng);
    g.flavor.kind = flavor == 0 ? SpaceFlavor::Kind::euclidean
                    : flavor == 1 ? SpaceFlavor::Kind::closure_random
                                  : SpaceFlavor::Kind::line;
    g.flavor.dim = 2;
    g.map_flavor.kind = MapFlavor::Kind::uniform_random;
    g.map_flavor.max_image = max_image;
    g.seed = rng();
    return generate(g);
}

} // namespace mvfix::test
