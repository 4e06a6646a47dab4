#include "openthermo/demos.hpp"

#include <map>
#include <stdexcept>

namespace openthermo {

namespace {

// Parameter values below are engineering defaults chosen for well-conditioned
// runs at laptop scale; they are not measurements.
const char* const kGas = R"(# Air-like ideal diatomic gas.
[gas air]
R = 8.314462618
c_v = 20.786156545
T_ref = 298.15
p_ref = 100000
u_ref = 6197
s_ref = 191.6
molar_mass = 0.028
)";

const char* const kRun = R"(
[run]
class = %CLASS%
t_final = 10
method = rk45
h0 = 0.001
h_min = 1e-10
h_max = 0.05
abs_tol = 1e-9
rel_tol = 1e-9
sample_dt = %DT%
)";

const char* const kTank = R"(
# Rigid tank filled through one port with warm, compressed gas.
[compartment tank]
V = 1
N0 = 40
T0 = 300

[port in]
compartment = tank
J = 0.1
T_in = 350
p_in = 200000
)";

const char* const kPiston = R"(
# Gas under a frictional piston, fed through a port with a bulk velocity.
[compartment cylinder]
V = 0.01
N0 = 0.4
T0 = 300

[port in]
compartment = cylinder
J = 0.01
T_in = 320
p_in = 120000
velocity = 5

[mechanics]
M = 200
A_section = 0.01
lambda_fr = 0.5
F_ext_q = -1000
F_ext_x = 0
q0 = 1
)";

const char* const kTwoCompartment = R"(
# Two vessels at one temperature exchanging matter through a membrane,
# fed on the left and drained on the right.
[compartment left]
V = 1
N0 = 45
T0 = 300

[compartment right]
V = 1
N0 = 35
T0 = 300

[coupling membrane]
between = left right
kind = diffusion_G
G = 2e-4

[port feed]
compartment = left
J = 0.02
T_in = 300
p_in = 150000

[port drain]
compartment = right
J = -0.03
)";

const char* const kSerial = R"(
# Diffusion through three membrane elements in series.
[compartment left]
V = 1
N0 = 50
T0 = 300

[compartment m1]
V = 0.1
N0 = 4.2
T0 = 300

[compartment m2]
V = 0.1
N0 = 4
T0 = 300

[compartment m3]
V = 0.1
N0 = 3.8
T0 = 300

[compartment right]
V = 1
N0 = 30
T0 = 300

[coupling a]
between = left m1
kind = diffusion_G
G = 1e-4

[coupling b]
between = m1 m2
kind = diffusion_G
G = 1e-4

[coupling c]
between = m2 m3
kind = diffusion_G
G = 1e-4

[coupling d]
between = m3 right
kind = diffusion_G
G = 1e-4

[port feed]
compartment = left
J = 0.01
T_in = 300
p_in = 200000

[port drain]
compartment = right
J = -0.01
)";

const char* const kParallel = R"(
# Diffusion through two membrane elements in parallel.
[compartment left]
V = 1
N0 = 50
T0 = 300

[compartment upper]
V = 0.1
N0 = 4
T0 = 300

[compartment lower]
V = 0.2
N0 = 8
T0 = 300

[compartment right]
V = 1
N0 = 30
T0 = 300

[coupling left-upper]
between = left upper
kind = diffusion_G
G = 1e-4

[coupling upper-right]
between = upper right
kind = diffusion_G
G = 1e-4

[coupling left-lower]
between = left lower
kind = diffusion_G
G = 5e-5

[coupling lower-right]
between = lower right
kind = diffusion_G
G = 5e-5

[port feed]
compartment = left
J = 0.01
T_in = 300
p_in = 200000

[port drain]
compartment = right
J = -0.01
)";

const char* const kHeatMatter = R"(
# Two compartments with their own temperatures, coupled by heat and matter
# transfer (including the cross effects), with ports and a heater.
[compartment hot]
V = 1
N0 = 40
T0 = 350

[compartment cold]
V = 1
N0 = 40
T0 = 300

[coupling wall]
between = hot cold
kind = onsager_2x2
L_HH = 5e6
L_HM = 300
L_MH = 300
L_MM = 0.2

[port feed]
compartment = hot
J = 0.05
T_in = 360
p_in = 160000

[port drain]
compartment = cold
J = -0.05

[source heater]
compartment = cold
J_S = 2
T_H = 400
)";

const char* const kParallelHeat = R"(
# Heat and matter transfer through two membrane elements in parallel.
[compartment hot]
V = 1
N0 = 40
T0 = 350

[compartment cold]
V = 1
N0 = 40
T0 = 300

[compartment upper]
V = 0.1
N0 = 4
T0 = 325

[compartment lower]
V = 0.1
N0 = 4
T0 = 325

[coupling hot-upper]
between = hot upper
kind = onsager_2x2
L_HH = 1e6
L_HM = 30
L_MH = 30
L_MM = 0.02

[coupling upper-cold]
between = upper cold
kind = onsager_2x2
L_HH = 1e6
L_HM = 30
L_MH = 30
L_MM = 0.02

[coupling hot-lower]
between = hot lower
kind = onsager_2x2
L_HH = 5e5
L_HM = -20
L_MH = -20
L_MM = 0.04

[coupling lower-cold]
between = lower cold
kind = onsager_2x2
L_HH = 5e5
L_HM = -20
L_MH = -20
L_MM = 0.04

[port feed]
compartment = hot
J = 0.02
T_in = 360
p_in = 160000

[port drain]
compartment = cold
J = -0.02
)";

std::string assemble(const char* body, const char* cls, const char* sample_dt = "0.01") {
  std::string run = kRun;
  run.replace(run.find("%CLASS%"), 7, cls);
  run.replace(run.find("%DT%"), 4, sample_dt);
  return std::string(kGas) + body + run;
}

const std::map<std::string, std::string, std::less<>>& table() {
  static const std::map<std::string, std::string, std::less<>> t = {
      {"tank", assemble(kTank, "simple_single")},
      {"piston", assemble(kPiston, "simple_mechanical", "0.001")},
      {"two-compartment", assemble(kTwoCompartment, "simple_diffusion")},
      {"serial-membrane", assemble(kSerial, "simple_diffusion")},
      {"parallel-membrane", assemble(kParallel, "simple_diffusion")},
      {"heat-matter", assemble(kHeatMatter, "non_simple", "0.0025")},
      {"parallel-heat-membrane", assemble(kParallelHeat, "non_simple", "0.0025")},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"tank",          "piston",
                                                 "two-compartment", "serial-membrane",
                                                 "parallel-membrane", "heat-matter",
                                                 "parallel-heat-membrane"};
  return names;
}

const std::string& demo_text(std::string_view name) {
  auto it = table().find(name);
  if (it == table().end()) throw std::out_of_range("unknown demo '" + std::string(name) + "'");
  return it->second;
}

Scenario demo_scenario(std::string_view name) { return parse_scenario(demo_text(name)); }

}  // namespace openthermo
