#include "cbdwr/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace cbdwr {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw Error("cannot open " + path + " for writing");
  out_ << header() << '\n' << std::flush;
}

std::string CsvWriter::header() {
  return "step,dofs_primal,eta_h,eta_primal,eta_adjoint,iter_err,J1,J2,J3,J4,J5,Jc,"
         "relerr1,relerr2,relerr3,relerr4,relerr5,abserr_Jc,Ieff";
}

std::string CsvWriter::row(const ConvergenceRecord& rec) {
  std::string s = std::to_string(rec.step) + ',' + std::to_string(rec.dofs_primal);
  auto add = [&](double v) { s += ',' + format_real(v); };
  add(rec.eta_h);
  add(rec.eta_primal);
  add(rec.eta_adjoint);
  add(rec.iteration_error);
  for (double j : rec.J) add(j);
  add(rec.Jc);
  for (double r : rec.relerr) add(r);
  add(rec.abserr_Jc);
  add(rec.effectivity ? *rec.effectivity : NAN);
  return s;
}

void CsvWriter::write(const ConvergenceRecord& rec) { out_ << row(rec) << '\n' << std::flush; }

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double d = n * sxx - sx * sx;
  if (d == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / d;
}

std::optional<double> loglog_interpolate(std::span<const double> x, std::span<const double> y, double x0) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] <= x0 && x0 <= x[i + 1] && y[i] > 0.0 && y[i + 1] > 0.0) {
      if (x[i + 1] == x[i]) return y[i];
      const double t = std::log(x0 / x[i]) / std::log(x[i + 1] / x[i]);
      return std::exp((1.0 - t) * std::log(y[i]) + t * std::log(y[i + 1]));
    }
  }
  return std::nullopt;
}

void write_summary(std::ostream& os, std::span<const ConvergenceRecord> records) {
  if (records.empty()) return;
  const ConvergenceRecord& last = records.back();
  os << "steps = " << records.size() << '\n';
  os << "final_dofs = " << last.dofs_primal << '\n';
  for (std::size_t k = 0; k < last.J.size(); ++k) {
    os << "J" << k + 1 << " = " << format_real(last.J[k]) << '\n';
  }
  for (std::size_t k = 0; k < last.relerr.size(); ++k) {
    os << "relerr" << k + 1 << " = " << format_real(last.relerr[k]) << '\n';
  }
  os << "abserr_Jc = " << format_real(last.abserr_Jc) << '\n';
  os << "Ieff = " << format_real(last.effectivity ? *last.effectivity : NAN) << '\n';

  const std::size_t tail = records.size() < 10 ? records.size() : 10;
  const auto recent = records.subspan(records.size() - tail);
  std::vector<double> dofs;
  std::vector<double> jc;
  for (const auto& r : recent) {
    dofs.push_back(static_cast<double>(r.dofs_primal));
    jc.push_back(r.abserr_Jc);
  }
  auto put = [&](const std::string& key, std::optional<double> v) {
    os << key << " = " << format_real(v ? *v : NAN) << '\n';
  };
  put("slope_abserr_Jc", loglog_slope(dofs, jc));
  for (std::size_t k = 0; k < last.relerr.size(); ++k) {
    std::vector<double> e;
    for (const auto& r : recent) e.push_back(r.relerr[k]);
    put("slope_relerr" + std::to_string(k + 1), loglog_slope(dofs, e));
  }
  os << "slope_window = " << tail << '\n';
}

void write_step_vtk(const std::string& path, const StepState& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  const auto u1 = vertex_values(s.u_h);
  const auto z1 = vertex_values(s.z_h);
  const auto u2 = vertex_values(s.u_h2);
  const auto z2 = vertex_values(s.z_h2);
  // Indicators live on Q1 dofs; map them to mesh vertices.
  std::vector<double> eta(s.mesh.vertices().size(), 0.0);
  const FunctionSpace& q1 = s.u_h.fs();
  for (std::size_t i = 0; i < q1.n_dofs(); ++i) {
    const int v = s.mesh.find_vertex(q1.dof_keys()[i]);
    if (v >= 0 && i < s.report.vertex_indicators.size()) eta[static_cast<std::size_t>(v)] = s.report.vertex_indicators[i];
  }
  const std::vector<NamedData> point_data{
      {"u_h", u1}, {"z_h", z1}, {"u_h2", u2}, {"z_h2", z2}, {"vertex_indicator", eta}};
  const std::vector<NamedData> cell_data{{"cell_indicator", s.report.cell_indicators}};
  write_vtk(out, s.mesh, point_data, cell_data);
}

}  // namespace cbdwr
