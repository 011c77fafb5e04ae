#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nsft/topent.hpp"

namespace nsft::io {

// Locale-independent rendering with 17 significant digits.
std::string format_real(double v);

using MetaRows = std::vector<std::pair<std::string, std::string>>;

// Trace CSV: '#'-prefixed metadata rows, then "horizon,value" lines.
std::string trace_csv(const EntropyTrace& trace, const MetaRows& meta,
                      double unit_scale);
std::string trace_json_text(const EntropyTrace& trace, const MetaRows& meta,
                            double unit_scale);

}  // namespace nsft::io
