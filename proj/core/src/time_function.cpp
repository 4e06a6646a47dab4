#include "openthermo/time_function.hpp"

#include <algorithm>
#include <cmath>

#include "openthermo/errors.hpp"

namespace openthermo {

TimeFunction TimeFunction::constant(double value) {
  TimeFunction f;
  f.kind_ = Kind::constant;
  f.params_ = {value};
  return f;
}

TimeFunction TimeFunction::ramp(double start_value, double end_value, double start_time,
                                double end_time) {
  if (!(end_time > start_time)) throw DomainError("ramp end time must exceed start time");
  TimeFunction f;
  f.kind_ = Kind::ramp;
  f.params_ = {start_value, end_value, start_time, end_time};
  return f;
}

TimeFunction TimeFunction::table(std::vector<std::pair<double, double>> points, std::string source) {
  if (points.empty()) throw DomainError("table needs at least one sample");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first)) {
      throw DomainError("table times must be strictly increasing");
    }
  }
  TimeFunction f;
  f.kind_ = Kind::table;
  f.params_.clear();
  f.points_ = std::move(points);
  f.source_ = std::move(source);
  return f;
}

double TimeFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::ramp: {
      const double x0 = params_[0], x1 = params_[1], t0 = params_[2], t1 = params_[3];
      if (t <= t0) return x0;
      if (t >= t1) return x1;
      return x0 + (x1 - x0) * (t - t0) / (t1 - t0);
    }
    case Kind::table: {
      if (t <= points_.front().first) return points_.front().second;
      if (t >= points_.back().first) return points_.back().second;
      auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                 [](double x, const auto& p) { return x < p.first; });
      auto lo = hi - 1;
      const double w = (t - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  return 0.0;
}

double TimeFunction::min_value() const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::ramp:
      return std::min(params_[0], params_[1]);
    case Kind::table: {
      double m = points_.front().second;
      for (const auto& p : points_) m = std::min(m, p.second);
      return m;
    }
  }
  return 0.0;
}

double TimeFunction::max_value() const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::ramp:
      return std::max(params_[0], params_[1]);
    case Kind::table: {
      double m = points_.front().second;
      for (const auto& p : points_) m = std::max(m, p.second);
      return m;
    }
  }
  return 0.0;
}

bool TimeFunction::operator==(const TimeFunction& other) const {
  return kind_ == other.kind_ && params_ == other.params_ && points_ == other.points_;
}

}  // namespace openthermo
