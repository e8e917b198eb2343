#include "ocp/problems.hpp"

#include <cmath>
#include <numbers>

#include "ocp/error.hpp"
#include "ocp/fem.hpp"

namespace ocp {

namespace {

constexpr double kPi = std::numbers::pi;

double poisson_desired(double x, double y, double) {
  return std::cos(kPi * x / 2.0) * std::cos(kPi * y / 2.0) + 1.0;
}

double heat_profile(double x, double y) {
  return std::cos(0.5 * kPi * (x - 1.0)) * std::cos(0.5 * kPi * (y - 1.0));
}

const Rectangle kPoissonDomain{-1.0, 1.0, -1.0, 1.0};

}  // namespace

NamedProblem poisson_control(double beta) {
  NamedProblem np;
  np.name = "poisson";
  np.domain = kPoissonDomain;
  np.defaults = {beta, 2, 0.0, TimeScheme::stationary};
  auto& p = np.problem;
  p.forward_operator = [](const Mesh& mesh, std::span<const double>, double) {
    return assemble_stiffness(mesh);
  };
  p.desired_state = poisson_desired;
  p.boundary_value = [](double, double, double) { return 1.0; };
  p.beta = beta;
  return np;
}

NamedProblem heat_control(double beta) {
  NamedProblem np;
  np.name = "heat";
  np.domain = {0.0, 2.0, 0.0, 2.0};
  np.defaults = {beta, 10, 2.0, TimeScheme::trapezoidal};
  auto& p = np.problem;
  p.forward_operator = [](const Mesh& mesh, std::span<const double>, double) {
    return assemble_stiffness(mesh);
  };
  p.desired_state = [](double x, double y, double t) { return t * heat_profile(x, y); };
  p.force = [](double x, double y, double) { return heat_profile(x, y); };
  p.beta = beta;
  return np;
}

std::vector<std::string> wind_names() { return {"recirculating", "zero", "uniform_x"}; }

VectorField named_wind(const std::string& name) {
  if (name == "recirculating") {
    return [](double x, double y) {
      return Point{2.0 * y * (1.0 - x * x), -2.0 * x * (1.0 - y * y)};
    };
  }
  if (name == "zero") return [](double, double) { return Point{0.0, 0.0}; };
  if (name == "uniform_x") return [](double, double) { return Point{1.0, 0.0}; };
  std::string msg = "unknown wind '" + name + "'; choices:";
  for (const auto& w : wind_names()) msg += " " + w;
  throw ConfigError(msg);
}

NamedProblem convdiff_control(const std::string& wind, double diffusivity, bool stationary,
                              double beta) {
  if (!(diffusivity > 0.0)) throw ConfigError("convdiff_control: diffusivity must be positive");
  NamedProblem np;
  np.name = "convdiff";
  np.domain = kPoissonDomain;
  np.defaults = stationary ? ProblemDefaults{beta, 2, 0.0, TimeScheme::stationary}
                           : ProblemDefaults{beta, 10, 2.0, TimeScheme::backward_euler};
  const VectorField w = named_wind(wind);
  const bool no_wind = wind == "zero";
  auto& p = np.problem;
  p.forward_operator = [w, diffusivity, no_wind](const Mesh& mesh, std::span<const double>, double) {
    SparseMatrix k = assemble_stiffness(mesh, diffusivity);
    if (no_wind) return k;
    return linear_combination(1.0, k, 1.0, assemble_convection(mesh, w));
  };
  p.desired_state = poisson_desired;
  p.boundary_value = [](double, double, double) { return 1.0; };
  if (!stationary) p.initial_condition = [](double, double) { return 1.0; };
  p.beta = beta;
  return np;
}

NamedProblem semilinear_poisson_control(double c, double beta) {
  NamedProblem np = poisson_control(beta);
  np.name = "semilinear";
  np.problem.state_dependent = c != 0.0;
  np.problem.forward_operator = [c](const Mesh& mesh, std::span<const double> state, double) {
    SparseMatrix k = assemble_stiffness(mesh);
    if (c == 0.0) return k;
    Vector d = lumped_mass(mesh);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= c * state[i];
    return linear_combination(1.0, k, 1.0, SparseMatrix::diagonal(d));
  };
  return np;
}

std::vector<std::string> problem_names() { return {"poisson", "heat", "convdiff"}; }

NamedProblem make_problem(const std::string& name) {
  if (name == "poisson") return poisson_control();
  if (name == "heat") return heat_control();
  if (name == "convdiff") return convdiff_control();
  std::string msg = "unknown problem '" + name + "'; choices:";
  for (const auto& n : problem_names()) msg += " " + n;
  throw ConfigError(msg);
}

std::vector<Mesh> problem_meshes(const NamedProblem& np, int k) {
  return build_mesh_hierarchy(k, np.domain);
}

}  // namespace ocp
