#include "nsft/io.hpp"

#include <charconv>

#include <json.hpp>

namespace nsft::io {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const EntropyTrace& trace, const MetaRows& meta,
                      double unit_scale) {
  std::string out;
  for (const auto& [key, value] : meta)
    out += "# " + key + "=" + value + "\n";
  out += "# tail_lo=" + std::to_string(trace.tail_lo) + "\n";
  out += "# tail_hi=" + std::to_string(trace.tail_hi) + "\n";
  out += "# tail_estimate=" + format_real(trace.tail_estimate * unit_scale) +
         "\n";
  out += "horizon,value\n";
  for (const auto& [n, v] : trace.points)
    out += std::to_string(n) + "," + format_real(v * unit_scale) + "\n";
  return out;
}

std::string trace_json_text(const EntropyTrace& trace, const MetaRows& meta,
                            double unit_scale) {
  nlohmann::json doc;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [key, value] : meta) m[key] = value;
  doc["meta"] = std::move(m);
  doc["tail"] = {{"lo", trace.tail_lo},
                 {"hi", trace.tail_hi},
                 {"estimate", trace.tail_estimate * unit_scale}};
  nlohmann::json points = nlohmann::json::array();
  for (const auto& [n, v] : trace.points)
    points.push_back({n, v * unit_scale});
  doc["points"] = std::move(points);
  return doc.dump(2) + "\n";
}

}  // namespace nsft::io
