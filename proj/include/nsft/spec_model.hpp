#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nsft {

// A 0-1 transition matrix between consecutive alphabets. Rows index source
// symbols, columns target symbols; symbols are 0-based internally.
struct TransitionMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::uint8_t> entries;  // row-major

  std::uint8_t at(std::int64_t r, std::int64_t c) const {
    return entries[(std::size_t)(r * cols + c)];
  }
  bool operator==(const TransitionMatrix&) const = default;

  static TransitionMatrix kronecker(const TransitionMatrix& a,
                                    const TransitionMatrix& b);
};

// Rule generating the run lengths k_1, k_2, ... of 'b' blocks.
struct KRule {
  enum class Kind { linear, pow2, list_cycle };
  Kind kind = Kind::linear;
  std::vector<std::int64_t> values;  // list_cycle only

  std::int64_t exponent(std::int64_t n) const;  // k_n for n >= 1
  bool operator==(const KRule&) const = default;
};

struct Pattern {
  enum class Kind { eventually_periodic, ab_family };
  Kind kind = Kind::eventually_periodic;
  std::vector<std::string> prefix;  // eventually_periodic
  std::vector<std::string> cycle;   // eventually_periodic
  std::string a;                    // ab_family
  std::string b;                    // ab_family
  KRule k;                          // ab_family
  bool operator==(const Pattern&) const = default;
};

struct Violation {
  std::string where;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::int64_t alphabet_bound = 0;
};

// Intensional description of the matrix sequence L_0, L_1, ... A spec is
// immutable after construction; `shifted` produces the sequence seen by the
// shifted system.
class MatrixSequenceSpec {
 public:
  MatrixSequenceSpec(std::string name,
                     std::map<std::string, TransitionMatrix> matrices,
                     Pattern pattern, std::int64_t shift = 0);

  const std::string& name() const { return name_; }
  const std::map<std::string, TransitionMatrix>& matrices() const {
    return matrices_;
  }
  const Pattern& pattern() const { return pattern_; }
  std::int64_t shift() const { return shift_; }

  const std::string& label_at(std::int64_t i) const;
  const TransitionMatrix& matrix_at(std::int64_t i) const;
  std::int64_t alphabet_size_at(std::int64_t i) const;  // l_i
  std::int64_t alphabet_bound() const;                  // sup over used labels

  MatrixSequenceSpec shifted(std::int64_t by) const;

 private:
  std::string name_;
  std::map<std::string, TransitionMatrix> matrices_;
  Pattern pattern_;
  std::int64_t shift_ = 0;
};

MatrixSequenceSpec parse_spec(const nlohmann::json& doc);
MatrixSequenceSpec parse_spec_text(std::string_view text);
MatrixSequenceSpec load_spec_file(const std::string& path);
nlohmann::json spec_to_json(const MatrixSequenceSpec& spec);

// Checks reducedness (no zero row or column), 0-1 entries, dimension
// chaining over [0, horizon], pattern sanity. Reports all violations.
ValidationReport validate(const MatrixSequenceSpec& spec,
                          std::int64_t horizon = 1000);

// Smallest n >= 1 with L_i * ... * L_{i+n-1} entrywise positive, or nullopt
// if none exists with n <= max_n.
std::optional<std::int64_t> primitivity_profile(const MatrixSequenceSpec& spec,
                                                std::int64_t i,
                                                std::int64_t max_n);

// Spec realizing the direct product system via Kronecker products of the
// aligned factor matrices. Supported alignments: two eventually-periodic
// patterns, two ab-family patterns with identical k rules, and an ab-family
// against a constant (single-matrix) periodic pattern.
MatrixSequenceSpec kronecker_product(const MatrixSequenceSpec& a,
                                     const MatrixSequenceSpec& b);

}  // namespace nsft
