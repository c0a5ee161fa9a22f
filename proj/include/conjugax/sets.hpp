#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace conjugax {

class FiniteSet;
using SetRef = std::shared_ptr<const FiniteSet>;

/// Ordered finite index set, optionally carrying one coordinate vector per point.
///
/// Abstract sets have dimension 0.  A product set records its factors and,
/// when every factor has coordinates, the concatenated factor coordinates.
class FiniteSet {
public:
    /// All points must share one dimension and hold finite reals; at least one point.
    FiniteSet(std::string id, const std::vector<std::vector<double>>& points);

    static FiniteSet abstract(std::string id, std::size_t size);
    static FiniteSet grid(std::string id, const std::vector<double>& coordinates);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool has_coordinates() const noexcept { return dim_ > 0; }

    /// Coordinates of point `i` (empty span for abstract sets).
    [[nodiscard]] std::span<const double> point(std::size_t i) const;

    /// First coordinate of every point; requires dim() == 1.
    [[nodiscard]] std::vector<double> coordinates_1d() const;

    [[nodiscard]] const std::vector<SetRef>& factors() const noexcept { return factors_; }
    [[nodiscard]] bool is_product() const noexcept { return !factors_.empty(); }

    friend bool operator==(const FiniteSet& a, const FiniteSet& b);

private:
    FiniteSet() = default;
    friend SetRef make_product(const std::vector<SetRef>& factors);

    std::string id_;
    std::size_t size_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> coords_;  // row-major, size_ * dim_
    std::vector<SetRef> factors_;
};

SetRef make_set(std::string id, const std::vector<std::vector<double>>& points);
SetRef make_abstract_set(std::string id, std::size_t size);
SetRef make_grid(std::string id, const std::vector<double>& coordinates);

/// Uniform 1-D grid of `n` points from `lo` to `hi` inclusive.
SetRef make_uniform_grid(std::string id, double lo, double hi, std::size_t n);

/// Cartesian product, enumerated row-major with the first factor outermost.
SetRef make_product(const std::vector<SetRef>& factors);

/// True when both refer to the same set (pointer or structural equality).
bool same_set(const SetRef& a, const SetRef& b);

/// Row-major index <-> tuple bijection over a list of factor sizes.
class ProductIndexer {
public:
    explicit ProductIndexer(std::vector<std::size_t> sizes);

    [[nodiscard]] std::size_t size() const noexcept { return total_; }
    [[nodiscard]] std::size_t index(std::span<const std::size_t> tuple) const;
    [[nodiscard]] std::vector<std::size_t> tuple(std::size_t index) const;

private:
    std::vector<std::size_t> sizes_;
    std::size_t total_ = 1;
};

}  // namespace conjugax
