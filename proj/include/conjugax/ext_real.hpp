#pragma once

// Extended reals [-inf, +inf] with J. J. Moreau's lower and upper additions.
//
// Lower addition resolves (+inf) + (-inf) to -inf and is the natural sum
// under a supremum; upper addition resolves it to +inf and is the natural
// sum under an infimum.  Both agree with ordinary addition otherwise.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conjugax {

class ExtReal {
public:
    enum class Tag : std::uint8_t { NegInf, Finite, PosInf };

    constexpr ExtReal() noexcept = default;

    /// IEEE infinities map onto the matching tag; NaN throws std::invalid_argument.
    ExtReal(double v);  // NOLINT(google-explicit-constructor): literals read naturally

    static constexpr ExtReal pos_inf() noexcept { return ExtReal(Tag::PosInf); }
    static constexpr ExtReal neg_inf() noexcept { return ExtReal(Tag::NegInf); }

    [[nodiscard]] constexpr Tag tag() const noexcept { return tag_; }
    [[nodiscard]] constexpr bool is_finite() const noexcept { return tag_ == Tag::Finite; }
    [[nodiscard]] constexpr bool is_pos_inf() const noexcept { return tag_ == Tag::PosInf; }
    [[nodiscard]] constexpr bool is_neg_inf() const noexcept { return tag_ == Tag::NegInf; }

    /// Finite payload. Throws std::domain_error on an infinite value.
    [[nodiscard]] double value() const;

    /// Lossless view as an IEEE double (infinite tags become +/-inf).
    [[nodiscard]] double to_double() const noexcept;

    friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept {
        return a.tag_ == b.tag_ && (a.tag_ != Tag::Finite || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
        if (a.tag_ != b.tag_) {
            return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
        }
        if (a.tag_ != Tag::Finite || a.value_ == b.value_) {
            return std::strong_ordering::equal;
        }
        return a.value_ < b.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }

private:
    constexpr explicit ExtReal(Tag t) noexcept : tag_(t) {}

    Tag tag_ = Tag::Finite;
    double value_ = 0.0;
};

/// Moreau lower addition: (+inf) + (-inf) = -inf.
[[nodiscard]] ExtReal low_add(ExtReal u, ExtReal v) noexcept;
/// Moreau upper addition: (+inf) + (-inf) = +inf.
[[nodiscard]] ExtReal upp_add(ExtReal u, ExtReal v) noexcept;
[[nodiscard]] ExtReal neg(ExtReal u) noexcept;

inline ExtReal operator-(ExtReal u) noexcept { return neg(u); }

/// Left folds. Throw std::invalid_argument("empty fold") on an empty range.
[[nodiscard]] ExtReal fold_low_add(std::span<const ExtReal> values);
[[nodiscard]] ExtReal fold_upp_add(std::span<const ExtReal> values);

/// Optimum of a nonempty range; `index` is the smallest index attaining it.
struct Extremum {
    ExtReal value;
    std::size_t index = 0;
};

/// Throw std::invalid_argument("empty extremum") on an empty range.
[[nodiscard]] Extremum sup(std::span<const ExtReal> values);
[[nodiscard]] Extremum inf(std::span<const ExtReal> values);

/// Text form: shortest round-trip decimal, or exactly "+inf" / "-inf".
[[nodiscard]] std::string to_text(ExtReal u);
/// Inverse of to_text; case-sensitive on the infinity tokens.
[[nodiscard]] ExtReal parse_ext_real(std::string_view text);

/// Signed difference rhs - lhs used for report margins: 0 when equal
/// (including matching infinities), otherwise rhs (upper+) (-lhs).
[[nodiscard]] ExtReal margin(ExtReal lhs, ExtReal rhs) noexcept;

/// Exact on infinite tags; finite pairs compare within `tol` absolute.
[[nodiscard]] bool approx_eq(ExtReal a, ExtReal b, double tol) noexcept;
[[nodiscard]] bool approx_le(ExtReal a, ExtReal b, double tol) noexcept;

}  // namespace conjugax
