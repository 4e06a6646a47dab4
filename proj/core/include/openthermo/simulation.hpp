#pragma once

#include <memory>
#include <span>
#include <vector>

#include "openthermo/dynamics.hpp"
#include "openthermo/integrator.hpp"
#include "openthermo/model.hpp"

namespace openthermo {

struct Sample {
  double t = 0.0;
  std::vector<double> y;
  Diagnostics diagnostics;
};

struct Trajectory {
  std::shared_ptr<const StateLayout> layout;
  std::vector<Sample> samples;
  Termination termination;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  bool completed() const { return termination.kind == Termination::Kind::completed; }
};

/// Integrates the model from `initial` to t_final. Diagnostics at each sample
/// are recomputed from the state with the unmutated dynamics.
Trajectory simulate(const NetworkModel& model, const SystemState& initial, double t_final,
                    const IntegrationOptions& options, const DynamicsOptions& dynamics = {});

/// Same, starting from initial_state(model).
Trajectory simulate(const NetworkModel& model, double t_final, const IntegrationOptions& options,
                    const DynamicsOptions& dynamics = {});

Diagnostics sample_diagnostics(const NetworkModel& model, const StateLayout& layout,
                               std::span<const double> y, double t);

}  // namespace openthermo
