#pragma once

// JSON and CSV encodings for instances, tables and reports.
//
// Extended reals are JSON numbers when finite and the strings "+inf" / "-inf"
// otherwise.  Loader errors carry the JSON pointer of the offending value.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "conjugax/bellman.hpp"
#include "conjugax/conjugacy.hpp"
#include "conjugax/coupling.hpp"
#include "conjugax/inf_convolution.hpp"
#include "conjugax/report.hpp"

namespace conjugax {

using Json = nlohmann::json;

/// Validation failure at a JSON pointer, e.g. "/stages/0/costs/1/2/0: costs must be nonnegative".
class LoadError : public std::invalid_argument {
public:
    LoadError(const std::string& pointer, const std::string& message)
        : std::invalid_argument((pointer.empty() ? "/" : pointer) + ": " + message),
          pointer_(pointer) {}
    [[nodiscard]] const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

[[nodiscard]] Json to_json(ExtReal v);
[[nodiscard]] ExtReal ext_from_json(const Json& j, const std::string& pointer);

[[nodiscard]] Json to_json(const ValueTable& t);
[[nodiscard]] Json to_json(const CheckReport& r);
[[nodiscard]] CheckReport report_from_json(const Json& j);

/// CSV with header check,<index names>,lhs,rhs,slack when the report lists
/// rows, and check,index,lhs,rhs (violations only) otherwise.
[[nodiscard]] std::string to_csv(const CheckReport& r);
/// CSV with header index,value.
[[nodiscard]] std::string to_csv(const ValueTable& t);

/// A resolved instance of the shared schema: named sets, couplings,
/// functions, kernels and convoluters, plus role bindings.
struct Instance {
    std::map<std::string, SetRef> sets;
    std::map<std::string, Coupling> couplings;
    std::map<std::string, ValueTable> functions;
    std::map<std::string, Kernel> kernels;
    std::map<std::string, Convoluter> convoluters;
    /// role -> object id; a role with no binding refers to the object of the same name.
    std::map<std::string, std::string> roles;

    [[nodiscard]] std::string resolve(const std::string& role) const;
    [[nodiscard]] const SetRef& set(const std::string& role) const;
    [[nodiscard]] const Coupling& coupling(const std::string& role) const;
    [[nodiscard]] const ValueTable& function(const std::string& role) const;
    [[nodiscard]] const Kernel& kernel(const std::string& role) const;
    [[nodiscard]] const Convoluter& convoluter(const std::string& role) const;
    [[nodiscard]] bool has_function(const std::string& role) const;
};

[[nodiscard]] Instance load_instance(const Json& j);
[[nodiscard]] SdpInstance load_sdp_instance(const Json& j);

/// Reads and parses a JSON file; std::invalid_argument on I/O or parse errors.
[[nodiscard]] Json read_json_file(const std::string& path);

}  // namespace conjugax
