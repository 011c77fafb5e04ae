#pragma once

#include <stdexcept>
#include <string>

namespace nsft {

// Malformed spec documents: schema violations, unknown labels, bad values.
// Messages carry the JSON path of the offending element.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Semantically invalid request against a well-formed spec (unsupported
// combination, wrong parameter domain).
struct spec_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Index or horizon outside what a generator can produce (pow2 cap, chain
// horizon, word depth).
struct range_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration or scan was refused because a configured cap would be
// exceeded. `count` is the decimal value that triggered the refusal, when
// known.
struct cap_error : std::runtime_error {
  std::string count;
  cap_error(const std::string& msg, std::string triggering_count = {})
      : std::runtime_error(msg), count(std::move(triggering_count)) {}
};

// Tail iteration did not reach the requested tolerance.
struct convergence_error : std::runtime_error {
  double residual;
  convergence_error(const std::string& msg, double r)
      : std::runtime_error(msg), residual(r) {}
};

// Assumption (A3) failed: no strictly positive block product in the
// inspected window.
struct primitivity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Word prefixes are too short to decide a metric comparison.
struct undecidable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsft
