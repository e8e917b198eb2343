#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocp/kkt.hpp"
#include "ocp/mesh.hpp"

namespace ocp {

struct ProblemDefaults {
  double beta = 1e-4;
  int n_t = 10;
  double t_f = 2.0;
  TimeScheme scheme = TimeScheme::stationary;
};

struct NamedProblem {
  std::string name;
  ControlProblem problem;
  Rectangle domain;
  ProblemDefaults defaults;

  bool stationary() const { return defaults.scheme == TimeScheme::stationary; }
};

/// -lap v = u on (-1,1)^2, v = 1 on the boundary,
/// v_d = cos(pi x / 2) cos(pi y / 2) + 1.
NamedProblem poisson_control(double beta = 1e-4);

/// dv/dt - lap v = u + f on (0,2)^2 x (0,2), v = 0 on the boundary and at t = 0,
/// v_d = t c(x, y), f = c(x, y) with c = cos(pi (x-1) / 2) cos(pi (y-1) / 2).
NamedProblem heat_control(double beta = 1e-4);

/// Named winds: "recirculating" (2y(1-x^2), -2x(1-y^2)), "zero", "uniform_x" (1, 0).
VectorField named_wind(const std::string& name);
std::vector<std::string> wind_names();

/// -eps lap v + w . grad v = u with the Poisson data. `stationary = false`
/// gives dv/dt + ... with v(x, 0) = 1 on (0, 2).
NamedProblem convdiff_control(const std::string& wind = "recirculating", double diffusivity = 0.1,
                              bool stationary = true, double beta = 1e-4);

/// Picard test problem: D(v) = K + c diag(lumped mass * v) on the Poisson data.
NamedProblem semilinear_poisson_control(double c, double beta = 1e-4);

/// Registry over {poisson, heat, convdiff}; throws ConfigError listing the
/// choices for an unknown name.
NamedProblem make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Nested meshes with nx = ny = 2^l, l = 1..k, on the problem domain.
std::vector<Mesh> problem_meshes(const NamedProblem& np, int k);

}  // namespace ocp
