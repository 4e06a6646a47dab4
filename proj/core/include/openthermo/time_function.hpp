#pragma once

#include <string>
#include <utility>
#include <vector>

namespace openthermo {

/// Prescribed scalar input f(t): constant, linear ramp, or a sampled table
/// with linear interpolation. Ramps and tables clamp outside their range.
class TimeFunction {
 public:
  enum class Kind { constant, ramp, table };

  TimeFunction() = default;

  static TimeFunction constant(double value);
  static TimeFunction ramp(double start_value, double end_value, double start_time, double end_time);
  /// `points` must have strictly increasing times. `source` is the file the
  /// table came from (kept for serialization only).
  static TimeFunction table(std::vector<std::pair<double, double>> points, std::string source = {});

  double operator()(double t) const;

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }
  const std::string& source() const noexcept { return source_; }

  /// Smallest and largest value the function can take.
  double min_value() const;
  double max_value() const;

  bool operator==(const TimeFunction& other) const;

 private:
  Kind kind_ = Kind::constant;
  std::vector<double> params_{0.0};
  std::vector<std::pair<double, double>> points_;
  std::string source_;
};

}  // namespace openthermo
