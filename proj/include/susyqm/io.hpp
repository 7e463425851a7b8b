#pragma once

// CSV and JSON forms of the library's results. Numbers carry 12
// significant digits, CSV uses ',' and LF line endings.

#include <iosfwd>
#include "json.hpp"
#include <string>
#include <vector>

#include "susyqm/catalog.hpp"
#include "susyqm/oracle.hpp"
#include "susyqm/shape_invariance.hpp"
#include "susyqm/susy.hpp"
#include "susyqm/venn.hpp"

namespace susyqm::io {

using nlohmann::json;

/// "%.12g", with negative zero printed as 0.
std::string format_number(double v);
/// v rounded to 12 significant digits (what format_number prints).
double round12(double v);

/// Columns sharing one grid: x, then one column per function.
void write_columns_csv(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<GridFunction>& columns);
void write_csv(std::ostream& out, const GridFunction& f, const std::string& name = "value");

/// Reads "x,V" rows (an optional header line is skipped). Throws
/// Error(Parse) on malformed rows and Error(GridMismatch) when the x
/// column is not uniform.
GridFunction read_tabulated_csv(const std::string& path);
GridFunction parse_tabulated_csv(std::istream& in);

json to_json(const Grid1D& g);
json to_json(const GridFunction& f);
json to_json(const ParamMap& p);
json to_json(const ParameterTransform& t);
json to_json(const Spectrum& s);
json to_json(const ResidualReport& r);
json to_json(const AlgebraReport& r);
json to_json(const PhaseReport& r);
json to_json(const TransformMatch& m);
json to_json(const VennTag& t);
json to_json(const SIPRecord& r);

/// Serialized with two-space indentation and a trailing newline.
std::string dump(const json& j);

}  // namespace susyqm::io
