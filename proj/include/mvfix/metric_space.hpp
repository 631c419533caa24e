#pragma once

// Finite metric spaces, point sets, and the set distances built on them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvfix {

using Index = std::size_t;

/// Default absolute slack for inequality checks on O(1)-normalized values.
inline constexpr double kDefaultSlack = 1e-9;

// ---------------------------------------------------------------------------
// Errors raised while validating a distance matrix.

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public MetricError {
public:
    using MetricError::MetricError;
};

class AsymmetryError : public MetricError {
public:
    AsymmetryError(Index row, Index col)
        : MetricError("asymmetric distance at (" + std::to_string(row) + "," + std::to_string(col) + ")"),
          row(row), col(col) {}
    Index row;
    Index col;
};

class NonzeroDiagonalError : public MetricError {
public:
    explicit NonzeroDiagonalError(Index index)
        : MetricError("nonzero diagonal entry at (" + std::to_string(index) + "," + std::to_string(index) + ")"),
          index(index) {}
    Index index;
};

class NonpositiveOffDiagonalError : public MetricError {
public:
    NonpositiveOffDiagonalError(Index row, Index col)
        : MetricError("off-diagonal entry at (" + std::to_string(row) + "," + std::to_string(col) +
                      ") is not a positive finite number"),
          row(row), col(col) {}
    Index row;
    Index col;
};

/// d(from, to) > d(from, via) + d(via, to) beyond the comparison slack.
class TriangleViolationError : public MetricError {
public:
    TriangleViolationError(Index from, Index to, Index via, double excess)
        : MetricError("triangle inequality violated at (" + std::to_string(from) + "," + std::to_string(to) + "," +
                      std::to_string(via) + "): excess " + std::to_string(excess)),
          from(from), to(to), via(via), excess(excess) {}
    Index from;
    Index to;
    Index via;
    double excess;
};

// ---------------------------------------------------------------------------

/// Nonempty set of point indices kept in canonical (strictly increasing) form.
class PointSet {
public:
    /// Sorts and deduplicates; throws std::invalid_argument when empty.
    explicit PointSet(std::vector<Index> members) : members_(std::move(members))
    {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (members_.empty()) {
            throw std::invalid_argument("PointSet must be nonempty");
        }
    }

    PointSet(std::initializer_list<Index> members) : PointSet(std::vector<Index>(members)) {}

    static PointSet singleton(Index x) { return PointSet({x}); }

    static bool is_canonical(std::span<const Index> members)
    {
        if (members.empty()) {
            return false;
        }
        return std::adjacent_find(members.begin(), members.end(), std::greater_equal<>()) == members.end();
    }

    std::span<const Index> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    Index front() const { return members_.front(); }
    Index back() const { return members_.back(); }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    bool contains(Index x) const { return std::binary_search(members_.begin(), members_.end(), x); }
    bool valid_in(std::size_t point_count) const { return members_.back() < point_count; }

    bool is_subset_of(const PointSet& other) const
    {
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
    }

    friend bool operator==(const PointSet&, const PointSet&) = default;
    friend auto operator<=>(const PointSet&, const PointSet&) = default;

private:
    std::vector<Index> members_;
};

// ---------------------------------------------------------------------------

template <typename Scalar>
class MetricSpace;

template <typename Scalar>
MetricSpace<Scalar> validate_metric(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dist,
                                    std::vector<std::string> labels = {}, double slack = kDefaultSlack);

/// A finite point set with a validated distance matrix. Only
/// validate_metric constructs one, so every instance satisfies the metric
/// axioms (triangle inequality up to the comparison slack).
template <typename Scalar>
class MetricSpace {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    std::size_t size() const { return static_cast<std::size_t>(dist_.rows()); }
    Scalar operator()(Index i, Index j) const { return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
    const Matrix& matrix() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// True when every entry is an integer; such spaces are compared exactly.
    bool integral() const { return integral_; }
    Scalar max_entry() const { return max_entry_; }

    /// Slack for comparisons between scale-free quantities (ratios).
    double ratio_slack(double base) const { return integral_ ? 0.0 : base; }
    /// Slack for comparisons between raw distances.
    double distance_slack(double base) const
    {
        return integral_ ? 0.0 : base * std::max(1.0, static_cast<double>(max_entry_));
    }

    friend bool operator==(const MetricSpace& a, const MetricSpace& b)
    {
        return a.labels_ == b.labels_ && a.dist_.rows() == b.dist_.rows() && a.dist_ == b.dist_;
    }

private:
    MetricSpace(Matrix dist, std::vector<std::string> labels)
        : dist_(std::move(dist)), labels_(std::move(labels))
    {
        integral_ = (dist_.array() == dist_.array().round()).all();
        max_entry_ = dist_.size() == 0 ? Scalar(0) : dist_.maxCoeff();
    }

    friend MetricSpace validate_metric<Scalar>(Matrix, std::vector<std::string>, double);

    Matrix dist_;
    std::vector<std::string> labels_;
    bool integral_ = false;
    Scalar max_entry_ = 0;
};

using MetricSpaceD = MetricSpace<double>;

/// Checks every metric axiom and returns the validated space. Structural
/// violations (diagonal, symmetry, positivity) are reported first, scanning
/// (i, j) row-major; the triangle inequality is then scanned over
/// (from, to, via) in row-major order. Missing labels default to indices.
template <typename Scalar>
MetricSpace<Scalar> validate_metric(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dist,
                                    std::vector<std::string> labels, double slack)
{
    const auto n = dist.rows();
    if (n < 1 || dist.cols() != n) {
        throw ShapeError("distance matrix must be square with at least one point");
    }
    const auto count = static_cast<std::size_t>(n);
    if (labels.empty()) {
        labels.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            labels.push_back(std::to_string(i));
        }
    } else if (labels.size() != count) {
        throw ShapeError("label count " + std::to_string(labels.size()) + " does not match point count " +
                         std::to_string(count));
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar v = dist(i, j);
            if (i == j) {
                if (v != Scalar(0)) {
                    throw NonzeroDiagonalError(static_cast<Index>(i));
                }
            } else if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
                throw NonpositiveOffDiagonalError(static_cast<Index>(i), static_cast<Index>(j));
            } else if (v != dist(j, i)) {
                throw AsymmetryError(static_cast<Index>(i), static_cast<Index>(j));
            }
        }
    }

    const bool integral = (dist.array() == dist.array().round()).all();
    const double tol = integral ? 0.0 : slack * std::max(1.0, static_cast<double>(dist.maxCoeff()));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double excess = static_cast<double>(dist(i, k)) - static_cast<double>(dist(i, j) + dist(j, k));
                if (excess > tol) {
                    throw TriangleViolationError(static_cast<Index>(i), static_cast<Index>(k), static_cast<Index>(j),
                                                 excess);
                }
            }
        }
    }
    return MetricSpace<Scalar>(std::move(dist), std::move(labels));
}

namespace detail {

template <typename Scalar>
void require_valid(const MetricSpace<Scalar>& space, const PointSet& set)
{
    if (!set.valid_in(space.size())) {
        throw std::out_of_range("point set index " + std::to_string(set.back()) + " outside space of size " +
                                std::to_string(space.size()));
    }
}

template <typename Scalar>
void require_valid(const MetricSpace<Scalar>& space, Index x)
{
    if (x >= space.size()) {
        throw std::out_of_range("point index " + std::to_string(x) + " outside space of size " +
                                std::to_string(space.size()));
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Set distances. On a finite space every nonempty subset is closed and
// bounded, so sup/inf become max/min.

/// delta(A, B) = max over a in A, b in B of d(a, b).
template <typename Scalar>
Scalar delta_distance(const MetricSpace<Scalar>& space, const PointSet& a, const PointSet& b)
{
    detail::require_valid(space, a);
    detail::require_valid(space, b);
    Scalar best = 0;
    for (Index i : a) {
        for (Index j : b) {
            best = std::max(best, space(i, j));
        }
    }
    return best;
}

/// Largest pairwise distance inside A; equals delta(A, A).
template <typename Scalar>
Scalar diameter(const MetricSpace<Scalar>& space, const PointSet& a)
{
    detail::require_valid(space, a);
    Scalar best = 0;
    const auto m = a.members();
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            best = std::max(best, space(m[i], m[j]));
        }
    }
    return best;
}

/// d(x, A) under the infimum convention: min over a in A of d(x, a).
template <typename Scalar>
Scalar point_set_distance(const MetricSpace<Scalar>& space, Index x, const PointSet& a)
{
    detail::require_valid(space, x);
    detail::require_valid(space, a);
    Scalar best = space(x, a.front());
    for (Index i : a) {
        best = std::min(best, space(x, i));
    }
    return best;
}

/// S(X_1, ..., X_n) = sum over i < j of delta(X_i, X_j).
template <typename Scalar>
Scalar total_pairwise(const MetricSpace<Scalar>& space, std::span<const PointSet> sets)
{
    if (sets.size() < 2) {
        throw std::invalid_argument("total pairwise distance needs at least two sets");
    }
    Scalar sum = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            sum += delta_distance(space, sets[i], sets[j]);
        }
    }
    return sum;
}

/// Point version: S(x_1, ..., x_n) = sum over i < j of d(x_i, x_j).
/// Repeated points are allowed and contribute zero.
template <typename Scalar>
Scalar total_pairwise(const MetricSpace<Scalar>& space, std::span<const Index> points)
{
    if (points.size() < 2) {
        throw std::invalid_argument("total pairwise distance needs at least two points");
    }
    Scalar sum = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        detail::require_valid(space, points[i]);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            sum += space(points[i], points[j]);
        }
    }
    return sum;
}

template <typename Scalar>
Scalar perimeter(const MetricSpace<Scalar>& space, Index a, Index b, Index c)
{
    detail::require_valid(space, a);
    detail::require_valid(space, b);
    detail::require_valid(space, c);
    return space(a, b) + space(b, c) + space(a, c);
}

} // namespace mvfix
