#include "openthermo/simulation.hpp"

#include "openthermo/errors.hpp"

namespace openthermo {

Diagnostics sample_diagnostics(const NetworkModel& model, const StateLayout& layout,
                               std::span<const double> y, double t) {
  return power_channels(model, layout, y, t);
}

Trajectory simulate(const NetworkModel& model, const SystemState& initial, double t_final,
                    const IntegrationOptions& options, const DynamicsOptions& dynamics) {
  require_valid(model);
  auto layout = initial.layout ? initial.layout
                               : std::make_shared<const StateLayout>(StateLayout::for_model(model));
  if (!(*layout == StateLayout::for_model(model)) || initial.y.size() != layout->size()) {
    throw StructuralError("initial state does not match the model layout");
  }
  const StateLayout& L = *layout;
  auto f = [&](double t, std::span<const double> y) { return rhs(model, L, y, t, dynamics); };
  auto guard = [&](double, std::span<const double> y) -> std::optional<std::string> {
    try {
      compartment_states(model, L, y);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  };
  IntegrationResult r = integrate(f, initial.t, initial.y, t_final, options, guard);

  Trajectory traj;
  traj.layout = layout;
  traj.termination = r.termination;
  traj.accepted_steps = r.accepted_steps;
  traj.rejected_steps = r.rejected_steps;
  traj.samples.reserve(r.times.size());
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    Sample s;
    s.t = r.times[i];
    s.y = std::move(r.states[i]);
    s.diagnostics = sample_diagnostics(model, L, s.y, s.t);
    traj.samples.push_back(std::move(s));
  }
  return traj;
}

Trajectory simulate(const NetworkModel& model, double t_final, const IntegrationOptions& options,
                    const DynamicsOptions& dynamics) {
  return simulate(model, initial_state(model), t_final, options, dynamics);
}

}  // namespace openthermo
