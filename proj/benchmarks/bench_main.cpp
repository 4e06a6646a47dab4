#include <benchmark/benchmark.h>

#include "openthermo/audit.hpp"
#include "openthermo/demos.hpp"
#include "openthermo/dynamics.hpp"
#include "openthermo/embedding.hpp"
#include "openthermo/scenario.hpp"

using namespace openthermo;

namespace {

const char* const kDemos[] = {"tank", "piston", "two-compartment", "serial-membrane", "parallel-membrane",
                              "heat-matter", "parallel-heat-membrane"};

// One right-hand-side evaluation per demo (arg = index into kDemos).
void BM_Rhs(benchmark::State& state) {
  const NetworkModel m = demo_scenario(kDemos[state.range(0)]).model;
  const SystemState s = initial_state(m);
  for (auto _ : state) {
    auto dy = rhs(m, *s.layout, s.y, 0.0);
    benchmark::DoNotOptimize(dy.data());
  }
  state.SetLabel(kDemos[state.range(0)]);
}
BENCHMARK(BM_Rhs)->DenseRange(0, 6);

void BM_EvaluateWithDiagnostics(benchmark::State& state) {
  const NetworkModel m = demo_scenario("heat-matter").model;
  const SystemState s = initial_state(m);
  for (auto _ : state) {
    auto ev = evaluate(m, *s.layout, s.y, 0.0);
    benchmark::DoNotOptimize(ev.diagnostics.I);
  }
}
BENCHMARK(BM_EvaluateWithDiagnostics);

void BM_SimulateTank(benchmark::State& state) {
  const Scenario s = demo_scenario("tank");
  for (auto _ : state) {
    auto tr = simulate(s.model, s.run.t_final, s.run.integration);
    benchmark::DoNotOptimize(tr.samples.size());
  }
}
BENCHMARK(BM_SimulateTank)->Unit(benchmark::kMillisecond);

void BM_SimulateHeatMatter(benchmark::State& state) {
  const Scenario s = demo_scenario("heat-matter");
  for (auto _ : state) {
    auto tr = simulate(s.model, s.run.t_final, s.run.integration);
    benchmark::DoNotOptimize(tr.samples.size());
  }
}
BENCHMARK(BM_SimulateHeatMatter)->Unit(benchmark::kMillisecond);

void BM_SolveAccelPiston(benchmark::State& state) {
  const NetworkModel m = demo_scenario("piston").model;
  const EmbeddedSystem es = embed_open_system(m);
  const SystemState s = initial_state(m);
  const auto z = es.configuration(s.y);
  const auto v = es.velocity_guess(s.y);
  for (auto _ : state) {
    auto r = solve_accel(es.system, 0.0, z, v);
    benchmark::DoNotOptimize(r.a.data());
  }
}
BENCHMARK(BM_SolveAccelPiston);

void BM_ParseScenario(benchmark::State& state) {
  const std::string& text = demo_text("parallel-heat-membrane");
  for (auto _ : state) {
    auto s = parse_scenario(text);
    benchmark::DoNotOptimize(s.model.compartments.size());
  }
  state.SetBytesProcessed(std::int64_t(state.iterations()) * std::int64_t(text.size()));
}
BENCHMARK(BM_ParseScenario);

void BM_AuditTank(benchmark::State& state) {
  const Scenario s = demo_scenario("tank");
  for (auto _ : state) {
    auto rep = run_audits(s.model, s.run.t_final, s.run.integration);
    benchmark::DoNotOptimize(rep.checks.size());
  }
}
BENCHMARK(BM_AuditTank)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
