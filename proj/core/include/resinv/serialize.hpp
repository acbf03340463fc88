#pragma once

#include "resinv/bounds.hpp"
#include "resinv/inverse.hpp"
#include "resinv/kernels.hpp"
#include "resinv/potential.hpp"
#include "resinv/resonances.hpp"

#include <string>

namespace resinv {

/// Locale-independent decimal with 17 significant digits, enough to
/// round-trip any double bit-exactly.  Non-finite values become the strings
/// "inf", "-inf", "nan" (their JSON encoding is quoted).
std::string format_double(double x);

/// JSON with fixed key order and format_double floats: the same value always
/// serializes to the same bytes.
std::string to_json(const Potential& q);
std::string to_json(const KernelGrid& k);
std::string to_json(const ResonanceSet& s);
std::string to_json(const BoundBreakdown& b);
std::string to_json(const GridFunction& f);
std::string to_json(const ReconstructionResult& r);

Potential potential_from_json(const std::string& text);
KernelGrid kernel_from_json(const std::string& text);
ResonanceSet resonances_from_json(const std::string& text);
GridFunction grid_function_from_json(const std::string& text);

/// Whole-file helpers; writes go through a temp file and a rename so partial
/// artifacts never appear under the final name.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace resinv
