#include "nsft/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsft/errors.hpp"
#include "nsft/io.hpp"
#include "nsft/metent.hpp"
#include "nsft/oracles.hpp"
#include "nsft/parry.hpp"
#include "nsft/spec_model.hpp"
#include "nsft/topent.hpp"
#include "nsft/word_counts.hpp"

namespace nsft {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145817656807;
constexpr std::int64_t kEnumCap = 1000000;

struct CommonOptions {
  std::int64_t horizon = 500;
  double tol = 1e-12;
  double window = 0.5;
  std::string unit = "nats";
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
};

double unit_scale(const std::string& unit) {
  return unit == "bits" ? 1.0 / kLn2 : 1.0;
}

void emit(const std::string& text, const CommonOptions& opt,
          std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path, std::ios::binary);
  if (!f) throw parse_error("cannot open output file: " + opt.out_path);
  f << text;
  if (!f) throw parse_error("cannot write output file: " + opt.out_path);
}

std::string csv_table(const io::MetaRows& meta, const std::string& header,
                      const std::vector<std::string>& rows) {
  std::string out;
  for (const auto& [key, value] : meta) out += "# " + key + "=" + value + "\n";
  out += header + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string json_table(const io::MetaRows& meta,
                       const std::vector<nlohmann::json>& rows,
                       const char* rows_key) {
  nlohmann::json doc;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [key, value] : meta) m[key] = value;
  doc["meta"] = std::move(m);
  doc[rows_key] = rows;
  return doc.dump(2) + "\n";
}

std::pair<int, int> parse_eps_grid(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw parse_error("--eps-grid expects lo:hi (exponents of 2^-x)");
  int lo = 0, hi = 0;
  try {
    lo = std::stoi(text.substr(0, colon));
    hi = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw parse_error("--eps-grid expects integer exponents lo:hi");
  }
  if (lo < 0 || hi < lo || hi > 60)
    throw parse_error("--eps-grid exponents must satisfy 0 <= lo <= hi <= 60");
  return {lo, hi};
}

int cmd_validate(const MatrixSequenceSpec& spec, const CommonOptions& opt,
                 std::ostream& out) {
  ValidationReport report = validate(spec, opt.horizon);
  io::MetaRows meta{{"command", "validate"},
                    {"spec", spec.name()},
                    {"horizon", std::to_string(opt.horizon)}};
  std::vector<std::string> lines;
  lines.push_back(std::string("ok=") + (report.ok ? "true" : "false"));
  lines.push_back("alphabet_bound=" + std::to_string(report.alphabet_bound));
  for (const auto& v : report.violations)
    lines.push_back("violation=" + v.where + "|" + v.rule + "|" + v.message);
  for (std::int64_t i = 0; i <= 4; ++i) {
    auto n = primitivity_profile(spec, i, 256);
    lines.push_back("primitivity_N[" + std::to_string(i) + "]=" +
                    (n ? std::to_string(*n) : std::string("none<=256")));
  }
  if (opt.format == "json") {
    nlohmann::json doc;
    doc["meta"] = {{"command", "validate"},
                   {"spec", spec.name()},
                   {"horizon", opt.horizon}};
    doc["ok"] = report.ok;
    doc["alphabet_bound"] = report.alphabet_bound;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : report.violations)
      vs.push_back({{"where", v.where},
                    {"rule", v.rule},
                    {"message", v.message}});
    doc["violations"] = std::move(vs);
    nlohmann::json prim = nlohmann::json::object();
    for (std::int64_t i = 0; i <= 4; ++i) {
      auto n = primitivity_profile(spec, i, 256);
      if (n) prim[std::to_string(i)] = *n;
    }
    doc["primitivity_N"] = std::move(prim);
    emit(doc.dump(2) + "\n", opt, out);
  } else {
    std::string text;
    for (const auto& [key, value] : meta)
      text += "# " + key + "=" + value + "\n";
    for (const auto& l : lines) text += l + "\n";
    emit(text, opt, out);
  }
  return report.ok ? 0 : 1;
}

int cmd_topent(const MatrixSequenceSpec& spec, const CommonOptions& opt,
               const std::string& norm, bool scaled, std::ostream& out) {
  TopentOptions topt;
  topt.window_fraction = opt.window;
  topt.norm = norm == "l1op" ? NormKind::col_sum_max : NormKind::entry_sum;
  topt.scaled_path = scaled;
  EntropyTrace trace = topent_trace(spec, opt.horizon, topt);
  io::MetaRows meta{{"command", "topent"},
                    {"spec", spec.name()},
                    {"horizon", std::to_string(opt.horizon)},
                    {"window", io::format_real(opt.window)},
                    {"norm", norm},
                    {"path", scaled ? "scaled-float" : "exact"},
                    {"unit", opt.unit}};
  double scale = unit_scale(opt.unit);
  emit(opt.format == "json" ? io::trace_json_text(trace, meta, scale)
                            : io::trace_csv(trace, meta, scale),
       opt, out);
  return 0;
}

int cmd_parry(const MatrixSequenceSpec& spec, const CommonOptions& opt,
              bool dump_p, std::int64_t sample_len, std::ostream& out) {
  ParryChain chain = parry_frames(spec, opt.horizon, opt.tol);
  io::MetaRows meta{{"command", "parry"},
                    {"spec", spec.name()},
                    {"horizon", std::to_string(opt.horizon)},
                    {"tol", io::format_real(opt.tol)},
                    {"v0", "ones"},
                    {"tail_depth", std::to_string(chain.tail_depth_used())},
                    {"residual", io::format_real(chain.convergence_residual())}};
  if (sample_len > 0) {
    meta.emplace_back("seed", std::to_string(opt.seed));
    meta.emplace_back("sample_len", std::to_string(sample_len));
    Word path = sample_path(chain, 0, sample_len, opt.seed);
    if (opt.format == "json") {
      std::vector<nlohmann::json> rows;
      for (std::size_t i = 0; i < path.size(); ++i)
        rows.push_back({(std::int64_t)i, path[i] + 1});
      emit(json_table(meta, rows, "path"), opt, out);
    } else {
      std::vector<std::string> rows;
      for (std::size_t i = 0; i < path.size(); ++i)
        rows.push_back(std::to_string(i) + "," + std::to_string(path[i] + 1));
      emit(csv_table(meta, "index,symbol", rows), opt, out);
    }
    return 0;
  }
  std::int64_t width = 0;
  for (std::int64_t i = 0; i <= chain.horizon(); ++i)
    width = std::max(width, (std::int64_t)chain.frame(i).w.size());
  if (opt.format == "json") {
    std::vector<nlohmann::json> rows;
    for (std::int64_t i = 0; i <= chain.horizon(); ++i) {
      const ParryFrame& f = chain.frame(i);
      nlohmann::json row{{"i", i},
                         {"lambda", f.lambda},
                         {"w", f.w},
                         {"v", f.v},
                         {"pi", f.pi}};
      if (dump_p) {
        row["P"] = f.P;
        row["p_cols"] = f.p_cols;
      }
      rows.push_back(std::move(row));
    }
    emit(json_table(meta, rows, "frames"), opt, out);
    return 0;
  }
  std::string header = "i,lambda";
  for (auto tag : {"w", "v", "pi"})
    for (std::int64_t c = 1; c <= width; ++c)
      header += std::string(",") + tag + "_" + std::to_string(c);
  std::vector<std::string> rows;
  for (std::int64_t i = 0; i <= chain.horizon(); ++i) {
    const ParryFrame& f = chain.frame(i);
    std::string row = std::to_string(i) + "," + io::format_real(f.lambda);
    for (const auto* vec : {&f.w, &f.v, &f.pi})
      for (std::int64_t c = 0; c < width; ++c)
        row += "," + (c < (std::int64_t)vec->size()
                          ? io::format_real((*vec)[(std::size_t)c])
                          : std::string());
    rows.push_back(std::move(row));
  }
  std::string text = csv_table(meta, header, rows);
  if (dump_p) {
    for (std::int64_t i = 0; i <= chain.horizon(); ++i) {
      const ParryFrame& f = chain.frame(i);
      text += "# P i=" + std::to_string(i) + " rows=" +
              std::to_string(f.P.size() / (std::size_t)f.p_cols) + " cols=" +
              std::to_string(f.p_cols) + "\n";
      for (std::size_t r = 0; r < f.P.size() / (std::size_t)f.p_cols; ++r) {
        std::string row;
        for (std::int64_t c = 0; c < f.p_cols; ++c) {
          if (c) row += ",";
          row += io::format_real(f.p_at((std::int64_t)r, c));
        }
        text += row + "\n";
      }
    }
  }
  emit(text, opt, out);
  return 0;
}

int cmd_metent(const MatrixSequenceSpec& spec, const CommonOptions& opt,
               std::optional<double> eps_single, const std::string& grid_text,
               std::ostream& out) {
  auto [lo, hi] = parse_eps_grid(grid_text);
  std::vector<double> grid;
  if (eps_single) {
    grid.push_back(*eps_single);
  } else {
    for (int j = lo; j <= hi; ++j) grid.push_back(std::ldexp(1.0, -j));
  }
  double eps_min = grid.back();
  for (double e : grid) eps_min = std::min(eps_min, e);
  std::int64_t needed = m_eps(spec, 0, eps_min);
  for (std::int64_t i = 1; i <= opt.horizon; ++i)
    needed = std::max(needed, i + m_eps(spec, i, eps_min));
  ParryChain chain = parry_frames(spec, needed, opt.tol);

  double scale = unit_scale(opt.unit);
  io::MetaRows meta{{"command", "metent"},
                    {"spec", spec.name()},
                    {"horizon", std::to_string(opt.horizon)},
                    {"tol", io::format_real(opt.tol)},
                    {"window", io::format_real(opt.window)},
                    {"v0", "ones"},
                    {"unit", opt.unit},
                    {"enum_cap", std::to_string(kEnumCap)}};
  if (eps_single) {
    meta.emplace_back("eps", io::format_real(*eps_single));
    EntropyTrace trace =
        metent_trace(spec, chain, *eps_single, opt.horizon, opt.window);
    emit(opt.format == "json" ? io::trace_json_text(trace, meta, scale)
                              : io::trace_csv(trace, meta, scale),
         opt, out);
    return 0;
  }
  meta.emplace_back("eps_grid", "2^-" + std::to_string(lo) + "..2^-" +
                                    std::to_string(hi));
  std::vector<std::pair<double, double>> table;
  double grid_max = -std::numeric_limits<double>::infinity();
  for (double eps : grid) {
    EntropyTrace trace = metent_trace(spec, chain, eps, opt.horizon, opt.window);
    table.emplace_back(eps, trace.tail_estimate);
    grid_max = std::max(grid_max, trace.tail_estimate);
  }
  meta.emplace_back("grid_max", io::format_real(grid_max * scale));
  if (opt.format == "json") {
    std::vector<nlohmann::json> rows;
    for (const auto& [eps, tail] : table)
      rows.push_back({{"eps", eps}, {"tail_estimate", tail * scale}});
    emit(json_table(meta, rows, "grid"), opt, out);
  } else {
    std::vector<std::string> rows;
    for (const auto& [eps, tail] : table)
      rows.push_back(io::format_real(eps) + "," + io::format_real(tail * scale));
    emit(csv_table(meta, "eps,tail_estimate", rows), opt, out);
  }
  return 0;
}

int cmd_oracle(const MatrixSequenceSpec& spec,
               const std::optional<MatrixSequenceSpec>& spec2,
               const CommonOptions& opt, std::int64_t depth,
               std::ostream& out) {
  std::vector<OracleResult> results = oracle_word_counts(spec, depth, kEnumCap);
  if (spec2) {
    auto more = oracle_product_entropy(spec, *spec2, opt.horizon);
    results.insert(results.end(), more.begin(), more.end());
  }
  const Pattern& p = spec.pattern();
  if (!spec2 && p.kind == Pattern::Kind::eventually_periodic &&
      p.prefix.empty() && p.cycle.size() == 1) {
    const TransitionMatrix& m = spec.matrices().at(p.cycle[0]);
    if (m.rows == m.cols && primitivity_profile(spec, 0, 256)) {
      auto more = oracle_stationary_parry(m);
      results.insert(results.end(), more.begin(), more.end());
    }
  }
  io::MetaRows meta{{"command", "oracle"},
                    {"spec", spec.name()},
                    {"depth", std::to_string(depth)},
                    {"horizon", std::to_string(opt.horizon)},
                    {"enum_cap", std::to_string(kEnumCap)}};
  if (spec2) meta.emplace_back("spec2", spec2->name());
  bool all_ok = true;
  for (const auto& r : results) all_ok = all_ok && (r.match || r.skipped);
  if (opt.format == "json") {
    std::vector<nlohmann::json> rows;
    for (const auto& r : results)
      rows.push_back({{"quantity", r.quantity},
                      {"method", r.method},
                      {"engine", r.engine_value},
                      {"oracle", r.oracle_value},
                      {"match", r.skipped ? "skipped"
                                          : (r.match ? "true" : "false")},
                      {"deviation", r.deviation}});
    emit(json_table(meta, rows, "results"), opt, out);
  } else {
    std::vector<std::string> rows;
    for (const auto& r : results)
      rows.push_back(r.quantity + "," + r.method + "," + r.engine_value + "," +
                     r.oracle_value + "," +
                     (r.skipped ? "skipped" : (r.match ? "true" : "false")) +
                     "," + io::format_real(r.deviation));
    emit(csv_table(meta, "quantity,method,engine,oracle,match,deviation", rows),
         opt, out);
  }
  return all_ok ? 0 : 1;
}

int cmd_product(const MatrixSequenceSpec& a, const MatrixSequenceSpec& b,
                const CommonOptions& opt, std::ostream& out) {
  MatrixSequenceSpec prod = kronecker_product(a, b);
  emit(spec_to_json(prod).dump(2) + "\n", opt, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"entropy calculator for nonstationary subshifts of finite type"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string spec_path, spec2_path;
  std::string norm = "sum";
  std::string grid_text = "3:12";
  std::optional<double> eps_single;
  double eps_value = 0.0;
  bool scaled = false, dump_p = false;
  std::int64_t sample_len = 0, depth = 10;

  auto add_common = [&](CLI::App* cmd, bool wants_second) {
    cmd->add_option("--horizon", opt.horizon, "trace horizon");
    cmd->add_option("--tol", opt.tol, "numeric tolerance");
    cmd->add_option("--window", opt.window, "tail window fraction");
    cmd->add_option("--unit", opt.unit, "nats or bits")
        ->check(CLI::IsMember({"nats", "bits"}));
    cmd->add_option("--out", opt.out_path, "output path (default stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opt.seed, "sampling seed");
    cmd->add_option("SPEC", spec_path, "spec file")->required();
    if (wants_second) cmd->add_option("SPEC2", spec2_path, "second spec file");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a spec");
  add_common(validate_cmd, false);

  CLI::App* topent_cmd =
      app.add_subcommand("topent", "topological entropy trace");
  add_common(topent_cmd, false);
  topent_cmd->add_option("--norm", norm, "sum or l1op")
      ->check(CLI::IsMember({"sum", "l1op"}));
  topent_cmd->add_flag("--scaled", scaled, "floating evaluation path");

  CLI::App* parry_cmd = app.add_subcommand("parry", "Parry chain frames");
  add_common(parry_cmd, false);
  parry_cmd->add_flag("--dump-p", dump_p, "emit stochastic matrices");
  parry_cmd->add_option("--sample", sample_len, "emit a sampled path instead");

  CLI::App* metent_cmd = app.add_subcommand("metent", "metric entropy trace");
  add_common(metent_cmd, false);
  auto* eps_opt = metent_cmd->add_option("--eps", eps_value, "single eps");
  metent_cmd->add_option("--eps-grid", grid_text, "exponent grid lo:hi")
      ->excludes(eps_opt);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "independent checks");
  add_common(oracle_cmd, true);
  oracle_cmd->add_option("--depth", depth, "enumeration depth");

  CLI::App* product_cmd =
      app.add_subcommand("product", "materialize a Kronecker product spec");
  add_common(product_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  // One bound variable serves every subcommand, so per-command horizon
  // defaults are resolved after parsing rather than via default_val.
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--horizon") > 0) continue;
    if (sub == validate_cmd) opt.horizon = 1000;
    else if (sub == parry_cmd) opt.horizon = 100;
    else if (sub == oracle_cmd) opt.horizon = 64;
    else opt.horizon = 500;
  }

  try {
    if (eps_opt->count() > 0) {
      if (!(eps_value > 0.0) || eps_value > 1.0)
        throw parse_error("--eps must lie in (0, 1]");
      eps_single = eps_value;
    }
    MatrixSequenceSpec spec = load_spec_file(spec_path);
    if (validate_cmd->parsed()) return cmd_validate(spec, opt, out);
    if (topent_cmd->parsed()) return cmd_topent(spec, opt, norm, scaled, out);
    if (parry_cmd->parsed()) return cmd_parry(spec, opt, dump_p, sample_len, out);
    if (metent_cmd->parsed())
      return cmd_metent(spec, opt, eps_single, grid_text, out);
    if (oracle_cmd->parsed()) {
      std::optional<MatrixSequenceSpec> spec2;
      if (!spec2_path.empty()) spec2 = load_spec_file(spec2_path);
      return cmd_oracle(spec, spec2, opt, depth, out);
    }
    if (product_cmd->parsed()) {
      if (spec2_path.empty())
        throw parse_error("product needs two spec files");
      MatrixSequenceSpec spec2 = load_spec_file(spec2_path);
      return cmd_product(spec, spec2, opt, out);
    }
    throw parse_error("no subcommand selected");
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nsft
