#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "conjugax/ext_real.hpp"
#include "conjugax/sets.hpp"

namespace conjugax {

/// Default cap on the number of entries a dense materialization may allocate.
inline constexpr std::size_t kDefaultMaterializeBudget = std::size_t{1} << 24;

/// Dense row-major matrix of extended reals.
class ExtMatrix {
public:
    ExtMatrix() = default;
    ExtMatrix(std::size_t rows, std::size_t cols, ExtReal fill = ExtReal(0.0));
    /// Nested rows; all rows must share one length.
    static ExtMatrix from_rows(const std::vector<std::vector<ExtReal>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    ExtReal& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    ExtReal operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const ExtReal> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] const std::vector<ExtReal>& data() const noexcept { return data_; }

    friend bool operator==(const ExtMatrix&, const ExtMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExtReal> data_;
};

/// A bivariate extended-real map c : primal x dual -> [-inf, +inf].
///
/// Couplings are immutable expression trees over five forms.  Sum couplings
/// act on product sets; their indices follow the row-major rule of
/// make_product (left factor outermost).
class Coupling {
public:
    enum class Kind { Table, Bilinear, Sum, Opposite, Transpose };

    static Coupling table(SetRef primal, SetRef dual, ExtMatrix values);
    /// sign * <x, x#>; both sets need coordinates of one common dimension.
    static Coupling bilinear(SetRef primal, SetRef dual, int sign = 1);
    /// Table of zeros.
    static Coupling zero(SetRef primal, SetRef dual);
    /// (x, y), (x#, y#) -> c(x, x#) (lower+) d(y, y#).
    static Coupling sum(const Coupling& left, const Coupling& right);
    static Coupling opposite(const Coupling& inner);
    static Coupling transpose(const Coupling& inner);

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] const SetRef& primal() const noexcept;
    [[nodiscard]] const SetRef& dual() const noexcept;

    /// Range-checked evaluation.
    [[nodiscard]] ExtReal eval(std::size_t i, std::size_t j) const;
    /// Unchecked evaluation; indices must be in range.
    [[nodiscard]] ExtReal operator()(std::size_t i, std::size_t j) const noexcept;

    /// Throws std::length_error("materialization too large") past `budget` entries.
    [[nodiscard]] ExtMatrix materialize(std::size_t budget = kDefaultMaterializeBudget) const;

    /// True when no entry is infinite.
    [[nodiscard]] bool is_finite_valued() const;

    // Structure accessors, valid for the matching kind only.
    [[nodiscard]] int sign() const;
    [[nodiscard]] const ExtMatrix& table_values() const;
    [[nodiscard]] const Coupling& left() const;
    [[nodiscard]] const Coupling& right() const;
    [[nodiscard]] const Coupling& inner() const;

private:
    struct Node;
    explicit Coupling(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

}  // namespace conjugax
