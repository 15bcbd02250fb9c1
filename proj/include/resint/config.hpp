#pragma once

#include "oracle.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace resint {

enum class Mode { Energy, Tensor, Coherence, Sweep, Scan, OracleCheck, SlopeFit };

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

/// Raised for malformed or invalid configuration; the message starts with the key path.
struct ConfigError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

enum class Spacing { Linear, Log, Extrema };

struct Range
{
  double min = 0;
  double max = 0;
  int count = 1;
  Spacing spacing = Spacing::Linear;
};

struct StateSpec
{
  enum class Kind { Pure, Werner, Matrix } kind = Kind::Pure;
  double theta = 0;
  double phi = 0;
  double p = 0;
  CMatrix4<double> matrix = CMatrix4<double>::Zero();
};

struct ScanSpec
{
  enum class Family { Pure, Werner } family = Family::Pure;
  Range theta;
  Range phi;
  Range p;
};

struct RunConfig
{
  std::optional<Mode> mode;
  std::optional<StateSpec> state;
  TwoAtomState<double> rho;
  TransitionDipole<double> dipole_a;
  TransitionDipole<double> dipole_b;
  double omega0 = 1;
  std::optional<double> r;
  std::optional<Range> r_range;
  Vector3<double> n = Vector3<double>::UnitZ();
  std::string output_path;
  bool coherence_columns = false;
  std::optional<double> average_period;
  std::optional<ScanSpec> scan;
  OracleConfig oracle;
  Tolerances<double> tol;
  int workers = 1;

  Geometry<double> geometry_at(double separation) const { return {separation, n, omega0}; }
};

/// Parses and validates a JSON configuration document. Unknown keys are rejected.
/// When `mode` is given it overrides/must agree with the document's "mode" key and
/// selects which of r / r_range / scan are required.
RunConfig parse_config(std::string_view text, std::optional<Mode> mode = std::nullopt);
RunConfig load_config(std::string const &path, std::optional<Mode> mode = std::nullopt);

/// Sample points of a range; Extrema snaps to r_k = k pi / omega0.
std::vector<double> range_points(Range const &range, double omega0 = 1);

TwoAtomState<double> resolve_state(StateSpec const &spec, Tolerances<double> const &tol = {});

} // namespace resint
