#include "cbdwr/reference.hpp"

#include <ostream>

#include "cbdwr/goals.hpp"
#include "cbdwr/output.hpp"

namespace cbdwr {

std::array<double, 5> richardson(std::span<const ReferenceLevel> levels) {
  if (levels.size() < 2) throw Error("richardson: need at least two levels");
  std::array<double, 5> out{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    // Normal equations for (J, C) with basis (1, 1/N).
    double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (const auto& l : levels) {
      const double x = 1.0 / static_cast<double>(l.dofs);
      const double y = l.J.at(k);
      n += 1;
      sx += x;
      sxx += x * x;
      sy += y;
      sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw Error("richardson: levels share the same dof count");
    out[k] = (sxx * sy - sx * sxy) / det;
  }
  return out;
}

ReferenceResult compute_reference(const ModelParams& params, const QoiSet& qois, std::size_t max_dofs,
                                  const NewtonConfig& newton, std::ostream* log) {
  params.validate();
  newton.validate();
  if (qois.size() != 5) throw Error("reference: expected five quantities of interest");
  ReferenceResult result;
  auto mesh = std::make_shared<const AdaptiveMesh>(initial_mesh());
  std::optional<DiscreteField> previous;
  for (int level = 0;; ++level) {
    const SpacePtr v2 = build_space(mesh, 2);
    if (v2->n_dofs() > max_dofs) break;
    DiscreteField start = previous ? transfer(*previous, v2) : zero_field(v2);
    NewtonResult nr = newton_solve(params, std::move(start), newton);
    ReferenceLevel l{level, v2->n_dofs(), evaluate_qois(qois, nr.u)};
    if (log != nullptr) {
      *log << "level " << level << "  Q2 dofs " << l.dofs << "  newton " << nr.iterations << '\n';
    }
    result.levels.push_back(std::move(l));
    previous = std::move(nr.u);
    mesh = std::make_shared<const AdaptiveMesh>(refine_uniform(*mesh));
  }
  if (result.levels.size() < 3) {
    throw Error("reference: dof budget " + std::to_string(max_dofs) + " admits only " +
                std::to_string(result.levels.size()) + " uniform levels, need 3");
  }
  result.extrapolated = richardson(std::span(result.levels).last(3));
  return result;
}

void write_reference(std::ostream& os, const ReferenceResult& result) {
  os << "# uniform Q2 levels, extrapolated over the last three assuming error ~ 1/dofs\n";
  for (const auto& l : result.levels) {
    os << "# level " << l.level << " dofs " << l.dofs;
    for (double j : l.J) os << ' ' << format_real(j);
    os << '\n';
  }
  for (std::size_t k = 0; k < result.extrapolated.size(); ++k) {
    os << "ref_J" << k + 1 << " = " << format_real(result.extrapolated[k]) << '\n';
  }
}

}  // namespace cbdwr
