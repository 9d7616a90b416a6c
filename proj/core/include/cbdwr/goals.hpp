#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbdwr/model.hpp"
#include "cbdwr/space.hpp"

namespace cbdwr {

/// The point of interest of the point-value functional.
inline constexpr Point kPointOfInterest{0.0, 0.5};

/// A linear quantity of interest: a subdomain integral or a point value.
struct Qoi {
  enum class Kind : std::uint8_t { SubdomainIntegral, PointValue };
  Kind kind = Kind::SubdomainIntegral;
  Subdomain subdomain = Subdomain::Omega1;
  Point point{};
  std::string name;
};

/// Ordered list of functionals. checkerboard() gives J1..J5: four subdomain
/// integrals followed by u(0, 1/2). With the stated layout J_k integrates
/// over Omega_k. With the published layout J1 and J2 trade places (J1 over
/// Omega2, J2 over Omega1), matching the published reference values.
struct QoiSet {
  std::vector<Qoi> members;

  std::size_t size() const { return members.size(); }
  const Qoi& operator[](std::size_t k) const { return members[k]; }

  static QoiSet checkerboard(Layout layout = Layout::Published);
};

double evaluate_qoi(const Qoi& qoi, const DiscreteField& u);
std::vector<double> evaluate_qois(const QoiSet& qois, const DiscreteField& u);

/// J'(v)(φ_i) for every dof. Condensed onto free dofs unless `condense` is false.
Vector qoi_derivative(const Qoi& qoi, const FunctionSpace& space, bool condense = true);

/// Sign and scale weights of the combined functional, frozen on one mesh.
struct CombinedWeights {
  std::vector<double> w;
  std::uint64_t mesh_generation = 0;
};

/// sign(x) = 1 for x ≥ 0, -1 otherwise.
constexpr double goal_sign(double x) { return x >= 0.0 ? 1.0 : -1.0; }

/// w_i = sign(J_i(enriched) - J_i(base)) / |J_i(base)|.
/// Throws Error when some J_i(base) is zero.
CombinedWeights combined_weights(std::span<const double> base, std::span<const double> enriched,
                                 std::uint64_t mesh_generation = 0);
CombinedWeights combined_weights(const QoiSet& qois, const DiscreteField& u_h, const DiscreteField& u_h2);

/// Σ w_i values_i.
double combined_value(const CombinedWeights& weights, std::span<const double> values);

/// Σ w_i J_i' on the space; the adjoint right-hand side.
Vector combined_derivative(const QoiSet& qois, const CombinedWeights& weights, const FunctionSpace& space);

}  // namespace cbdwr
