#pragma once

// JSON wire layer for the command-line front end: parses job payloads (exact
// rationals as "p/q" strings, divisor family descriptions, curves) and
// serializes results byte-deterministically (alphabetically ordered keys,
// shortest round-trip decimals).

#include "zariskilab/p1_divisors.hpp"
#include "zariskilab/rational.hpp"
#include "zariskilab/zariski_core.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace zar::cli {

using json = nlohmann::json;

// Schema violations in otherwise well-formed JSON (exit code 2 territory).
struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

// Shortest decimal that round-trips to the same double ("2", "0.5", "1e-30").
// Non-finite values are rejected upstream and never reach the formatter.
std::string format_double(double v);

// Compact dump with deterministic bytes: object keys in lexicographic order,
// floats via format_double, integers verbatim, no insignificant whitespace.
// No trailing newline; the CLI appends one when emitting a document.
std::string dump_deterministic(const json& j);

// Exact rationals travel as "p/q" strings; plain JSON integers are accepted,
// JSON floats are rejected to preserve exactness.
Rat rat_from_json(const json& j);
json rat_to_json(const Rat& r);

// Payload keys: "q" (matrix of rationals, required), "labels" (optional array
// of distinct strings, default "0".."n-1").
core::ZariskiSystem system_from_json(const json& payload);

// Array of `expect` rationals (expect == 0 skips the length check).
std::vector<Rat> ratvec_from_json(const json& j, std::size_t expect,
                                  const char* what);

// Any JSON number (integer or float), finite.
double finite_number(const json& j, const char* what);
// JSON integer (floats rejected even when integral).
long long integer_number(const json& j, const char* what);

// Divisor descriptions:
//   {"family":"one-kink","lambda":1,"log_alpha":1,"log_beta":-1}
//     (spellings "log_a"/"log_b" are accepted; lambda defaults to 1)
//   {"family":"two-kink","log_alpha":a,"log_alpha_p":a2,"log_beta":b,"log_beta_p":b2}
//   {"family":"admissible","lambda":l}
//   {"family":"principal-shift","k":k,"base":{...}}
//   {"family":"scaled","t":t,"base":{...}}
//   {"family":"kinked","c0":c,"a0":a,"kinks":[{"t":t,"mass":m},...]}
//   {"family":"zero"}
// Every family additionally accepts inline wrapper keys "shift" (principal
// shift by k, applied first) and "scale" (formal scaling, applied second).
// Unknown keys are rejected; `extra_ok` lists payload keys that belong to the
// surrounding command and are ignored here.
p1::ModelDivisor divisor_from_json(const json& j,
                                   const std::set<std::string>& extra_ok = {});
json divisor_to_json(const p1::ModelDivisor& d);

// "C0" | "Cinf" | {"m":m,"n":n} for the rational point z = m/n.
p1::HorizontalCurve curve_from_json(const json& j);
std::string curve_to_string(const p1::HorizontalCurve& c);

}  // namespace zar::cli
