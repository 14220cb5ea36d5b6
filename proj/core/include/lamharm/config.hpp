#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lamharm/axis.hpp"
#include "lamharm/problem.hpp"

namespace lamharm {

/// Parses a JSON problem config. Throws ParseError on malformed JSON,
/// SchemaError on missing, unknown or mistyped fields and ValidationError
/// (with the field path) when the spec violates a structural invariant.
///
///   {"dimension": 2, "components": 1, "radii": [1.0, 0.5],
///    "boundary": {"A": [[0]], "B": [[1]],
///                 "data": {"modes": [{"l": 1, "cos": [1], "sin": [0]}]}},
///    "interfaces": [{"j1": [{"A": .., "B": ..}, {"A": .., "B": ..}],
///                    "j2": [..], "data1": {..}, "data2": {..}}]}
///
/// Zonal (N = 3) modes are written {"l": 2, "legendre": [..]}. Data blocks and
/// the cos / sin members of a mode are optional and default to zero.
ProblemSpec parse_config(std::string_view text);
ProblemSpec load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(serialize_config(s)) == s.
std::string serialize_config(const ProblemSpec& spec);

/// {"breakpoints": [..], "speeds": [..],
///  "couplings": [{"m1": [[alpha, beta], [alpha, beta]], "m2": [..]}]}
/// where m1 lists the left-side operators of conditions 1 and 2 and m2 the
/// right-side ones.
AxisSpec parse_axis_config(std::string_view text);
AxisSpec load_axis_config(const std::filesystem::path& path);
std::string serialize_axis_config(const AxisSpec& spec);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lamharm
