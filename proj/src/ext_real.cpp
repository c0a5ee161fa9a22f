#include "conjugax/ext_real.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace conjugax {

ExtReal::ExtReal(double v) {
    if (std::isnan(v)) {
        throw std::invalid_argument("NaN is not an extended real");
    }
    if (std::isinf(v)) {
        tag_ = v > 0 ? Tag::PosInf : Tag::NegInf;
    } else {
        value_ = v;
    }
}

double ExtReal::value() const {
    if (tag_ != Tag::Finite) {
        throw std::domain_error("infinite extended real has no finite payload");
    }
    return value_;
}

double ExtReal::to_double() const noexcept {
    switch (tag_) {
    case Tag::NegInf: return -std::numeric_limits<double>::infinity();
    case Tag::PosInf: return std::numeric_limits<double>::infinity();
    case Tag::Finite: break;
    }
    return value_;
}

namespace {

// Sum when at most one infinity sign is involved.  Overflow of two finite
// payloads saturates to the matching infinite tag.
ExtReal unambiguous_sum(ExtReal u, ExtReal v) noexcept {
    if (u.is_finite() && v.is_finite()) {
        return ExtReal(u.value() + v.value());
    }
    return u.is_finite() ? v : u;
}

}  // namespace

ExtReal low_add(ExtReal u, ExtReal v) noexcept {
    if (u.is_neg_inf() || v.is_neg_inf()) {
        return ExtReal::neg_inf();
    }
    return unambiguous_sum(u, v);
}

ExtReal upp_add(ExtReal u, ExtReal v) noexcept {
    if (u.is_pos_inf() || v.is_pos_inf()) {
        return ExtReal::pos_inf();
    }
    return unambiguous_sum(u, v);
}

ExtReal neg(ExtReal u) noexcept {
    switch (u.tag()) {
    case ExtReal::Tag::NegInf: return ExtReal::pos_inf();
    case ExtReal::Tag::PosInf: return ExtReal::neg_inf();
    case ExtReal::Tag::Finite: break;
    }
    return ExtReal(-u.value());
}

ExtReal fold_low_add(std::span<const ExtReal> values) {
    if (values.empty()) {
        throw std::invalid_argument("empty fold");
    }
    ExtReal acc = values.front();
    for (auto v : values.subspan(1)) {
        acc = low_add(acc, v);
    }
    return acc;
}

ExtReal fold_upp_add(std::span<const ExtReal> values) {
    if (values.empty()) {
        throw std::invalid_argument("empty fold");
    }
    ExtReal acc = values.front();
    for (auto v : values.subspan(1)) {
        acc = upp_add(acc, v);
    }
    return acc;
}

Extremum sup(std::span<const ExtReal> values) {
    if (values.empty()) {
        throw std::invalid_argument("empty extremum");
    }
    Extremum best{values[0], 0};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > best.value) {
            best = {values[i], i};
        }
    }
    return best;
}

Extremum inf(std::span<const ExtReal> values) {
    if (values.empty()) {
        throw std::invalid_argument("empty extremum");
    }
    Extremum best{values[0], 0};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < best.value) {
            best = {values[i], i};
        }
    }
    return best;
}

std::string to_text(ExtReal u) {
    if (u.is_pos_inf()) {
        return "+inf";
    }
    if (u.is_neg_inf()) {
        return "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, u.value());
    if (ec != std::errc{}) {
        throw std::runtime_error("cannot format extended real");
    }
    return {buf, ptr};
}

ExtReal parse_ext_real(std::string_view text) {
    if (text == "+inf") {
        return ExtReal::pos_inf();
    }
    if (text == "-inf") {
        return ExtReal::neg_inf();
    }
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw std::invalid_argument("not an extended real: '" + std::string(text) + "'");
    }
    return ExtReal(v);
}

ExtReal margin(ExtReal lhs, ExtReal rhs) noexcept {
    if (lhs == rhs) {
        return ExtReal(0.0);
    }
    return upp_add(rhs, neg(lhs));
}

bool approx_eq(ExtReal a, ExtReal b, double tol) noexcept {
    if (a.is_finite() && b.is_finite()) {
        return std::abs(a.value() - b.value()) <= tol;
    }
    return a == b;
}

bool approx_le(ExtReal a, ExtReal b, double tol) noexcept {
    if (a <= b) {
        return true;
    }
    return a.is_finite() && b.is_finite() && a.value() - b.value() <= tol;
}

}  // namespace conjugax
