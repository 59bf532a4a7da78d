#pragma once

#include <string>

#include "mmot/measures.hpp"

namespace mmot {

/// Parses the instance interchange format:
///   { "d": int, "N": int, "m": int,
///     "marginals": [ [ [float x d] x m ] x N ] }
/// The declared d/N/m must match the nested array shape exactly; marginal and
/// atom order in the file is authoritative. Throws ParseError on malformed
/// JSON or shape mismatch.
Instance parse_instance(const std::string& json_text);

/// parse_instance over the contents of `path`. Throws ParseError when the
/// file cannot be read.
Instance load_instance(const std::string& path);

std::string instance_to_json(const Instance& instance);

void save_instance(const Instance& instance, const std::string& path);

/// "%.6g" when full_precision is false, shortest round-trip otherwise.
std::string format_double(double value, bool full_precision);

/// Re-parses `text` formatted by format_double — used to round display
/// values so JSON reports show 6 significant digits by default.
double display_value(double value, bool full_precision);

}  // namespace mmot
