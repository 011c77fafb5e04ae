#include "nsft/spec_model.hpp"

#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nsft/errors.hpp"

namespace nsft {

namespace {

constexpr std::int64_t kMaxAlphabet = 512;
constexpr std::int64_t kIndexCap = std::numeric_limits<std::int64_t>::max() / 4;

std::string index_path(const std::string& base, std::int64_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

TransitionMatrix TransitionMatrix::kronecker(const TransitionMatrix& a,
                                             const TransitionMatrix& b) {
  TransitionMatrix out;
  out.rows = a.rows * b.rows;
  out.cols = a.cols * b.cols;
  out.entries.assign((std::size_t)(out.rows * out.cols), 0);
  for (std::int64_t r1 = 0; r1 < a.rows; ++r1)
    for (std::int64_t c1 = 0; c1 < a.cols; ++c1) {
      if (a.at(r1, c1) == 0) continue;
      for (std::int64_t r2 = 0; r2 < b.rows; ++r2)
        for (std::int64_t c2 = 0; c2 < b.cols; ++c2) {
          if (b.at(r2, c2) == 0) continue;
          std::int64_t r = r1 * b.rows + r2;
          std::int64_t c = c1 * b.cols + c2;
          out.entries[(std::size_t)(r * out.cols + c)] = 1;
        }
    }
  return out;
}

std::int64_t KRule::exponent(std::int64_t n) const {
  if (n < 1) throw range_error("k rule index must be >= 1");
  switch (kind) {
    case Kind::linear:
      return n;
    case Kind::pow2:
      if (n >= 62)
        throw range_error("pow2 k rule: block " + std::to_string(n) +
                          " exceeds the representable cap");
      return std::int64_t{1} << n;
    case Kind::list_cycle:
      return values[(std::size_t)((n - 1) % (std::int64_t)values.size())];
  }
  throw spec_error("unreachable k rule kind");
}

MatrixSequenceSpec::MatrixSequenceSpec(
    std::string name, std::map<std::string, TransitionMatrix> matrices,
    Pattern pattern, std::int64_t shift)
    : name_(std::move(name)),
      matrices_(std::move(matrices)),
      pattern_(std::move(pattern)),
      shift_(shift) {
  auto used = std::set<std::string>{};
  if (pattern_.kind == Pattern::Kind::eventually_periodic) {
    if (pattern_.cycle.empty())
      throw parse_error("pattern.cycle: must be nonempty");
    for (const auto& l : pattern_.prefix) used.insert(l);
    for (const auto& l : pattern_.cycle) used.insert(l);
  } else {
    used.insert(pattern_.a);
    used.insert(pattern_.b);
    if (pattern_.k.kind == KRule::Kind::list_cycle) {
      if (pattern_.k.values.empty())
        throw parse_error("pattern.k.values: must be nonempty");
      for (auto v : pattern_.k.values)
        if (v < 1) throw parse_error("pattern.k.values: entries must be >= 1");
    }
  }
  for (const auto& l : used)
    if (!matrices_.count(l))
      throw parse_error("pattern: unknown matrix label '" + l + "'");
}

const std::string& MatrixSequenceSpec::label_at(std::int64_t i) const {
  if (i < 0) throw range_error("matrix index must be >= 0");
  i += shift_;
  if (pattern_.kind == Pattern::Kind::eventually_periodic) {
    auto p = (std::int64_t)pattern_.prefix.size();
    if (i < p) return pattern_.prefix[(std::size_t)i];
    auto c = (std::int64_t)pattern_.cycle.size();
    return pattern_.cycle[(std::size_t)((i - p) % c)];
  }
  // ab family: 'a' sits at positions p_0 = 0, p_n = p_{n-1} + k_n + 1.
  std::int64_t p = 0;
  std::int64_t n = 1;
  while (p < i) {
    std::int64_t k = pattern_.k.exponent(n++);
    if (p > kIndexCap - k - 1)
      throw range_error("ab pattern: index " + std::to_string(i - shift_) +
                        " is beyond the representable block cap");
    p += k + 1;
  }
  return p == i ? pattern_.a : pattern_.b;
}

const TransitionMatrix& MatrixSequenceSpec::matrix_at(std::int64_t i) const {
  return matrices_.at(label_at(i));
}

std::int64_t MatrixSequenceSpec::alphabet_size_at(std::int64_t i) const {
  return matrix_at(i).rows;
}

std::int64_t MatrixSequenceSpec::alphabet_bound() const {
  std::int64_t bound = 0;
  auto consider = [&](const std::string& label) {
    const auto& m = matrices_.at(label);
    bound = std::max({bound, m.rows, m.cols});
  };
  if (pattern_.kind == Pattern::Kind::eventually_periodic) {
    for (const auto& l : pattern_.prefix) consider(l);
    for (const auto& l : pattern_.cycle) consider(l);
  } else {
    consider(pattern_.a);
    consider(pattern_.b);
  }
  return bound;
}

MatrixSequenceSpec MatrixSequenceSpec::shifted(std::int64_t by) const {
  if (by < 0) throw range_error("shift must be >= 0");
  if (by == 0) return *this;
  if (pattern_.kind == Pattern::Kind::eventually_periodic && shift_ == 0) {
    // Fold the shift into the pattern so the result stays serializable.
    Pattern p = pattern_;
    std::int64_t drop = std::min<std::int64_t>(by, (std::int64_t)p.prefix.size());
    p.prefix.erase(p.prefix.begin(), p.prefix.begin() + drop);
    std::int64_t rot = (by - drop) % (std::int64_t)p.cycle.size();
    std::rotate(p.cycle.begin(), p.cycle.begin() + rot, p.cycle.end());
    return MatrixSequenceSpec(name_, matrices_, std::move(p), 0);
  }
  return MatrixSequenceSpec(name_, matrices_, pattern_, shift_ + by);
}

namespace {

void require_keys(const nlohmann::json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw parse_error(path + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw parse_error(path + "." + item.key() + ": unknown field");
  }
}

std::string get_string(const nlohmann::json& obj, const std::string& path,
                       const std::string& key) {
  if (!obj.contains(key)) throw parse_error(path + "." + key + ": missing");
  if (!obj[key].is_string())
    throw parse_error(path + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

TransitionMatrix parse_matrix(const nlohmann::json& rows,
                              const std::string& path) {
  if (!rows.is_array() || rows.empty())
    throw parse_error(path + ": expected a nonempty array of rows");
  TransitionMatrix m;
  m.rows = (std::int64_t)rows.size();
  for (std::int64_t r = 0; r < m.rows; ++r) {
    const auto& row = rows[(std::size_t)r];
    std::string row_path = index_path(path, r);
    if (!row.is_array() || row.empty())
      throw parse_error(row_path + ": expected a nonempty row array");
    if (r == 0) {
      m.cols = (std::int64_t)row.size();
      if (m.rows > kMaxAlphabet || m.cols > kMaxAlphabet)
        throw parse_error(path + ": matrix larger than the supported bound");
      m.entries.assign((std::size_t)(m.rows * m.cols), 0);
    } else if ((std::int64_t)row.size() != m.cols) {
      throw parse_error(row_path + ": ragged row length");
    }
    for (std::int64_t c = 0; c < m.cols; ++c) {
      const auto& cell = row[(std::size_t)c];
      if (!cell.is_number_integer() ||
          (cell.get<std::int64_t>() != 0 && cell.get<std::int64_t>() != 1))
        throw parse_error(index_path(row_path, c) + ": entries must be 0 or 1");
      m.entries[(std::size_t)(r * m.cols + c)] =
          (std::uint8_t)cell.get<std::int64_t>();
    }
  }
  return m;
}

std::vector<std::string> parse_label_list(const nlohmann::json& arr,
                                          const std::string& path) {
  if (!arr.is_array()) throw parse_error(path + ": expected an array");
  std::vector<std::string> out;
  for (std::int64_t i = 0; i < (std::int64_t)arr.size(); ++i) {
    const auto& v = arr[(std::size_t)i];
    if (!v.is_string())
      throw parse_error(index_path(path, i) + ": expected a label string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

KRule parse_krule(const nlohmann::json& obj, const std::string& path) {
  KRule rule;
  std::string kind = get_string(obj, path, "kind");
  if (kind == "linear") {
    require_keys(obj, path, {"kind"});
    rule.kind = KRule::Kind::linear;
  } else if (kind == "pow2") {
    require_keys(obj, path, {"kind"});
    rule.kind = KRule::Kind::pow2;
  } else if (kind == "list-cycle") {
    require_keys(obj, path, {"kind", "values"});
    rule.kind = KRule::Kind::list_cycle;
    if (!obj.contains("values") || !obj["values"].is_array() ||
        obj["values"].empty())
      throw parse_error(path + ".values: expected a nonempty array");
    for (std::int64_t i = 0; i < (std::int64_t)obj["values"].size(); ++i) {
      const auto& v = obj["values"][(std::size_t)i];
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        throw parse_error(index_path(path + ".values", i) +
                          ": entries must be integers >= 1");
      rule.values.push_back(v.get<std::int64_t>());
    }
  } else {
    throw parse_error(path + ".kind: unknown k rule '" + kind + "'");
  }
  return rule;
}

}  // namespace

MatrixSequenceSpec parse_spec(const nlohmann::json& doc) {
  require_keys(doc, "$", {"name", "matrices", "pattern"});
  std::string name = get_string(doc, "$", "name");
  if (!doc.contains("matrices")) throw parse_error("$.matrices: missing");
  if (!doc["matrices"].is_object() || doc["matrices"].empty())
    throw parse_error("$.matrices: expected a nonempty object");
  std::map<std::string, TransitionMatrix> matrices;
  for (const auto& item : doc["matrices"].items())
    matrices[item.key()] = parse_matrix(item.value(), "matrices." + item.key());

  if (!doc.contains("pattern")) throw parse_error("$.pattern: missing");
  const auto& pat = doc["pattern"];
  Pattern pattern;
  std::string kind = get_string(pat, "pattern", "kind");
  if (kind == "eventually-periodic") {
    require_keys(pat, "pattern", {"kind", "prefix", "cycle"});
    if (!pat.contains("prefix")) throw parse_error("pattern.prefix: missing");
    if (!pat.contains("cycle")) throw parse_error("pattern.cycle: missing");
    pattern.kind = Pattern::Kind::eventually_periodic;
    pattern.prefix = parse_label_list(pat["prefix"], "pattern.prefix");
    pattern.cycle = parse_label_list(pat["cycle"], "pattern.cycle");
    if (pattern.cycle.empty())
      throw parse_error("pattern.cycle: must be nonempty");
  } else if (kind == "ab-family") {
    require_keys(pat, "pattern", {"kind", "a", "b", "k"});
    pattern.kind = Pattern::Kind::ab_family;
    pattern.a = get_string(pat, "pattern", "a");
    pattern.b = get_string(pat, "pattern", "b");
    if (!pat.contains("k")) throw parse_error("pattern.k: missing");
    pattern.k = parse_krule(pat["k"], "pattern.k");
  } else {
    throw parse_error("pattern.kind: unknown pattern '" + kind + "'");
  }
  return MatrixSequenceSpec(std::move(name), std::move(matrices),
                            std::move(pattern));
}

MatrixSequenceSpec parse_spec_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_spec(doc);
}

MatrixSequenceSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open spec file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

nlohmann::json spec_to_json(const MatrixSequenceSpec& spec) {
  if (spec.shift() != 0)
    throw spec_error("shifted ab-family specs are not serializable");
  nlohmann::json doc;
  doc["name"] = spec.name();
  nlohmann::json mats = nlohmann::json::object();
  for (const auto& [label, m] : spec.matrices()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t r = 0; r < m.rows; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::int64_t c = 0; c < m.cols; ++c) row.push_back((int)m.at(r, c));
      rows.push_back(std::move(row));
    }
    mats[label] = std::move(rows);
  }
  doc["matrices"] = std::move(mats);
  const auto& p = spec.pattern();
  nlohmann::json pat;
  if (p.kind == Pattern::Kind::eventually_periodic) {
    pat["kind"] = "eventually-periodic";
    pat["prefix"] = p.prefix;
    pat["cycle"] = p.cycle;
  } else {
    pat["kind"] = "ab-family";
    pat["a"] = p.a;
    pat["b"] = p.b;
    nlohmann::json k;
    switch (p.k.kind) {
      case KRule::Kind::linear:
        k["kind"] = "linear";
        break;
      case KRule::Kind::pow2:
        k["kind"] = "pow2";
        break;
      case KRule::Kind::list_cycle:
        k["kind"] = "list-cycle";
        k["values"] = p.k.values;
        break;
    }
    pat["k"] = std::move(k);
  }
  doc["pattern"] = std::move(pat);
  return doc;
}

ValidationReport validate(const MatrixSequenceSpec& spec,
                          std::int64_t horizon) {
  ValidationReport report;
  auto add = [&](std::string where, std::string rule, std::string message) {
    report.ok = false;
    report.violations.push_back(
        {std::move(where), std::move(rule), std::move(message)});
  };

  for (const auto& [label, m] : spec.matrices()) {
    for (const auto& e : m.entries)
      if (e != 0 && e != 1) {
        add("matrices." + label, "entry-01", "entries must be 0 or 1");
        break;
      }
    for (std::int64_t r = 0; r < m.rows; ++r) {
      bool any = false;
      for (std::int64_t c = 0; c < m.cols; ++c) any = any || m.at(r, c) != 0;
      if (!any)
        add("matrices." + label, "A1-row",
            "row " + std::to_string(r + 1) + " is all zero");
    }
    for (std::int64_t c = 0; c < m.cols; ++c) {
      bool any = false;
      for (std::int64_t r = 0; r < m.rows; ++r) any = any || m.at(r, c) != 0;
      if (!any)
        add("matrices." + label, "A1-col",
            "column " + std::to_string(c + 1) + " is all zero");
    }
    if (m.rows > kMaxAlphabet || m.cols > kMaxAlphabet)
      add("matrices." + label, "A2-bound", "alphabet larger than supported");
  }

  report.alphabet_bound = spec.alphabet_bound();

  try {
    for (std::int64_t i = 0; i < horizon; ++i) {
      const auto& cur = spec.matrix_at(i);
      const auto& nxt = spec.matrix_at(i + 1);
      if (cur.cols != nxt.rows) {
        add("sequence[" + std::to_string(i) + "]", "dim-chain",
            "cols(L_" + std::to_string(i) + ")=" + std::to_string(cur.cols) +
                " != rows(L_" + std::to_string(i + 1) + ")=" +
                std::to_string(nxt.rows));
        break;
      }
    }
  } catch (const range_error&) {
    // Pattern ran out of representable blocks before the horizon; the spec
    // is still valid on the range it can produce.
  }
  return report;
}

std::optional<std::int64_t> primitivity_profile(const MatrixSequenceSpec& spec,
                                                std::int64_t i,
                                                std::int64_t max_n) {
  // Boolean products: track the support of L_i * ... * L_{i+n-1} as row bit
  // masks, one vector<uint64> per row.
  std::int64_t rows = spec.alphabet_size_at(i);
  std::int64_t cols = rows;
  auto words = [](std::int64_t c) { return (std::size_t)((c + 63) / 64); };
  std::vector<std::vector<std::uint64_t>> acc(
      (std::size_t)rows, std::vector<std::uint64_t>(words(cols), 0));
  for (std::int64_t r = 0; r < rows; ++r)
    acc[(std::size_t)r][(std::size_t)(r / 64)] |= 1ull << (r % 64);

  for (std::int64_t n = 1; n <= max_n; ++n) {
    const auto& m = spec.matrix_at(i + n - 1);
    if (m.rows != cols)
      throw spec_error("dimension chain broken at index " +
                       std::to_string(i + n - 1));
    std::int64_t next_cols = m.cols;
    std::vector<std::vector<std::uint64_t>> mrows(
        (std::size_t)m.rows, std::vector<std::uint64_t>(words(next_cols), 0));
    for (std::int64_t r = 0; r < m.rows; ++r)
      for (std::int64_t c = 0; c < next_cols; ++c)
        if (m.at(r, c))
          mrows[(std::size_t)r][(std::size_t)(c / 64)] |= 1ull << (c % 64);
    std::vector<std::vector<std::uint64_t>> next(
        (std::size_t)rows, std::vector<std::uint64_t>(words(next_cols), 0));
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t g = 0; g < cols; ++g)
        if (acc[(std::size_t)r][(std::size_t)(g / 64)] >> (g % 64) & 1)
          for (std::size_t wi = 0; wi < next[(std::size_t)r].size(); ++wi)
            next[(std::size_t)r][wi] |= mrows[(std::size_t)g][wi];
    acc = std::move(next);
    cols = next_cols;
    bool all = true;
    for (std::int64_t r = 0; all && r < rows; ++r)
      for (std::int64_t c = 0; all && c < cols; ++c)
        all = (acc[(std::size_t)r][(std::size_t)(c / 64)] >> (c % 64) & 1) != 0;
    if (all) return n;
  }
  return std::nullopt;
}

namespace {

std::string pair_label(const std::string& a, const std::string& b) {
  return a + "*" + b;
}

}  // namespace

MatrixSequenceSpec kronecker_product(const MatrixSequenceSpec& a,
                                     const MatrixSequenceSpec& b) {
  if (a.shift() != 0 || b.shift() != 0)
    throw spec_error("kronecker products of shifted ab-family specs are unsupported");
  const Pattern& pa = a.pattern();
  const Pattern& pb = b.pattern();
  std::map<std::string, TransitionMatrix> matrices;
  auto combined = [&](const std::string& la, const std::string& lb) {
    std::string label = pair_label(la, lb);
    if (!matrices.count(label))
      matrices[label] = TransitionMatrix::kronecker(a.matrices().at(la),
                                                    b.matrices().at(lb));
    return label;
  };
  std::string name = a.name() + "*" + b.name();

  bool a_periodic = pa.kind == Pattern::Kind::eventually_periodic;
  bool b_periodic = pb.kind == Pattern::Kind::eventually_periodic;
  if (a_periodic && b_periodic) {
    std::int64_t pre =
        std::max(pa.prefix.size(), pb.prefix.size());
    std::int64_t cyc = std::lcm((std::int64_t)pa.cycle.size(),
                                (std::int64_t)pb.cycle.size());
    Pattern pattern;
    pattern.kind = Pattern::Kind::eventually_periodic;
    for (std::int64_t i = 0; i < pre; ++i)
      pattern.prefix.push_back(combined(a.label_at(i), b.label_at(i)));
    for (std::int64_t i = pre; i < pre + cyc; ++i)
      pattern.cycle.push_back(combined(a.label_at(i), b.label_at(i)));
    return MatrixSequenceSpec(name, std::move(matrices), std::move(pattern));
  }
  if (!a_periodic && !b_periodic) {
    if (!(pa.k == pb.k))
      throw spec_error(
          "kronecker product of ab-family specs requires identical k rules");
    Pattern pattern;
    pattern.kind = Pattern::Kind::ab_family;
    pattern.a = combined(pa.a, pb.a);
    pattern.b = combined(pa.b, pb.b);
    pattern.k = pa.k;
    return MatrixSequenceSpec(name, std::move(matrices), std::move(pattern));
  }
  // ab family against a constant periodic factor.
  const MatrixSequenceSpec& ab = a_periodic ? b : a;
  const MatrixSequenceSpec& per = a_periodic ? a : b;
  const Pattern& pper = per.pattern();
  if (!pper.prefix.empty() || pper.cycle.size() != 1)
    throw spec_error(
        "kronecker product of an ab-family spec requires a constant factor");
  const std::string& cl = pper.cycle[0];
  const Pattern& pab = ab.pattern();
  Pattern pattern;
  pattern.kind = Pattern::Kind::ab_family;
  if (a_periodic) {
    pattern.a = combined(cl, pab.a);
    pattern.b = combined(cl, pab.b);
  } else {
    pattern.a = combined(pab.a, cl);
    pattern.b = combined(pab.b, cl);
  }
  pattern.k = pab.k;
  return MatrixSequenceSpec(name, std::move(matrices), std::move(pattern));
}

}  // namespace nsft
