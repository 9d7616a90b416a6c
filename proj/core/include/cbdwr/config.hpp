#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "cbdwr/adapt.hpp"

namespace cbdwr {

/// Malformed or invalid configuration. line/column are 1-based, 0 when the
/// problem is not tied to a position.
class ConfigError : public Error {
public:
  ConfigError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

struct RunConfig {
  AdaptConfig adapt;
  ModelParams model;
  std::array<double, 5> reference = kReferenceValues;
  std::string output_dir = "output";
  bool dump_fields = false;
  Layout layout = Layout::Published;
};

/// Flat `key = value` text, `#` starts a comment. Keys:
///   layout (published|stated), mode (adaptive|uniform), max_dofs, max_steps, theta, f, epsilon,
///   newton_abs_tol, quad_order_omega1..4, ref_J1..ref_J5,
///   reference_file, output_dir, dump_fields (true|false).
/// A reference_file is resolved relative to the config file and its
/// ref_J* lines override the defaults; explicit ref_J* keys win over both.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>",
                       const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Reads only ref_J1..ref_J5 from a reference file.
std::array<double, 5> load_reference(const std::string& path, std::array<double, 5> defaults = kReferenceValues);

}  // namespace cbdwr
