#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fraxonium/potential_forge.hpp"
#include "fraxonium/spectral_engine.hpp"

namespace fraxonium::spectral {

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

std::vector<std::string> preset_names() {
  return {"qutrit", "qutrit-asym", "d4", "d5-paper", "d5-solver", "fluxonium"};
}

std::pair<double, double> preset_defaults(std::string_view name) {
  if (name == "qutrit" || name == "qutrit-asym") return {0.08, 0.03};
  if (name == "d4" || name == "d5-paper" || name == "d5-solver") return {0.01, 0.04};
  if (name == "fluxonium") return {0.1, 0.05};
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

CircuitSpec make_preset(std::string_view name, const PresetParams& params) {
  const auto [ec0, el0] = preset_defaults(name);
  CircuitSpec spec;
  spec.e_c = params.e_c.value_or(ec0);
  spec.e_l = params.e_l.value_or(el0);
  spec.n_fock = params.n_fock;
  spec.phi_x = params.phi_x;
  const double el = spec.e_l;

  if (name == "qutrit") {
    spec.harmonics = {{1, kPi2 * el / 4.0, 0.0}, {2, -1.0, 0.0}};
  } else if (name == "qutrit-asym") {
    // E_J0 cos(phi) - E~_J sin(phi) - E~_K cos(2 phi)
    spec.harmonics = {{1, params.e_j0.value_or(kPi2 * el / 4.0), 0.0},
                      {1, params.e_j_tilde, std::numbers::pi / 2.0},
                      {2, -params.e_k_tilde, 0.0}};
  } else if (name == "d4") {
    spec.harmonics = {{4, 1.0, 0.0}, {1, kPi2 * el / (4.0 * std::sqrt(2.0)), 0.0}};
  } else if (name == "d5-paper") {
    spec.harmonics = {{4, -1.0, 0.0}, {1, kPi2 * el / 8.0, 0.0}, {2, -kPi2 * el / 32.0, 0.0}};
  } else if (name == "d5-solver") {
    const auto pot = forge::solve_coefficients({5, el, 0});
    return circuit_from_potential(pot, spec.e_c, spec.n_fock, spec.phi_x);
  } else if (name == "fluxonium") {
    spec.harmonics = {{1, -1.0, 0.0}};
  }
  spec.validate();
  return spec;
}

CircuitSpec circuit_from_potential(const forge::EngineeredPotential& pot, double e_c, int n_fock,
                                   double phi_x) {
  CircuitSpec spec;
  spec.e_c = e_c;
  spec.e_l = pot.eta();
  spec.n_fock = n_fock;
  spec.phi_x = phi_x;
  spec.harmonics.push_back({pot.leading_order(), static_cast<double>(pot.leading_sign()), 0.0});
  for (const auto& c : pot.coefficients) spec.harmonics.push_back({c.n, pot.eta() * c.a, 0.0});
  spec.validate();
  return spec;
}

}  // namespace fraxonium::spectral
