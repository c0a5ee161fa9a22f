#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "conjugax/ext_real.hpp"

namespace conjugax {

/// Absolute tolerance for comparing two independently computed finite values.
inline constexpr double kDefaultTolerance = 1e-9;

struct Violation {
    std::vector<std::size_t> index;
    ExtReal lhs;
    ExtReal rhs;
};

/// One asserted comparison lhs <= rhs (or lhs = rhs) at a multi-index.
struct ReportRow {
    std::vector<std::size_t> index;
    ExtReal lhs;
    ExtReal rhs;
    ExtReal slack;
};

/// Outcome of an executable implication check.
///
/// `conclusion_holds` stays empty whenever the hypothesis fails: the checked
/// statements are implications and say nothing in that case.
struct CheckReport {
    std::string check;
    bool hypothesis_holds = true;
    std::optional<bool> conclusion_holds;
    std::vector<Violation> violations;
    std::vector<ExtReal> margins;
    /// Indices at which a per-point premise was not met (nothing asserted there).
    std::vector<std::vector<std::size_t>> unmet;
    std::vector<std::string> notes;
    /// Optional full listing of asserted comparisons, with names for the index columns.
    std::vector<std::string> index_names;
    std::vector<ReportRow> rows;

    /// False only on an asserted conclusion that failed.
    [[nodiscard]] bool ok() const noexcept { return conclusion_holds.value_or(true); }
};

}  // namespace conjugax
