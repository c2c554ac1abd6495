#include "ductflow/flow_data.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ductflow/pchip.hpp"

namespace ductflow {

ExpDataParams corner_exp_data(const GasParameters& gas,
                              const DuctProfile& profile) {
  return corner_exp_data(gas, profile, 1.0 - std::sqrt(gas.nu()), 1.0);
}

ExpDataParams corner_exp_data(const GasParameters& gas,
                              const DuctProfile& profile, double s0,
                              double r0) {
  if (!(0.0 < s0 && s0 < r0)) {
    throw std::domain_error("corner data needs 0 < s0 < r0");
  }
  const double xB = profile.x_begin();
  const double kB = profile.k(xB);
  const double g = gas.gamma();
  const double gsrc = 0.125 * (g - 1.0) * kB * (r0 * r0 - s0 * s0);
  const Speeds lam = eigenvalues(RiemannState{s0, r0}, gas);
  // Boundary family slopes at t=0: S_B'(0) = -s0, R_B'(0) = -r0.
  ExpDataParams p;
  p.s0 = s0;
  p.r0 = r0;
  p.s0_slope = (gsrc + s0) / lam.lambda1;
  p.r0_slope = (-gsrc + r0) / lam.lambda2;
  return p;
}

BoundaryData make_exp_boundary(const ExpDataParams& p) {
  const double s0 = p.s0, r0 = p.r0;
  BoundaryData b;
  b.S = [s0](double t) { return s0 / (1.0 + t); };
  b.dS = [s0](double t) { return -s0 / ((1.0 + t) * (1.0 + t)); };
  b.R = [r0](double t) { return r0 / (1.0 + t); };
  b.dR = [r0](double t) { return -r0 / ((1.0 + t) * (1.0 + t)); };
  return b;
}

InitialData make_exp_initial(const ExpDataParams& p,
                             const DuctProfile& profile) {
  const double xB = profile.x_begin();
  const double kB = profile.k(xB);
  const double aB = profile.a(xB);
  double cs = 0.0, cr = 0.0;
  if (kB != 0.0) {
    cs = p.s0_slope / (p.s0 * kB);
    cr = p.r0_slope / (p.r0 * kB);
  } else if (p.s0_slope != 0.0 || p.r0_slope != 0.0) {
    throw std::domain_error(
        "straight duct (k(xB)=0) admits only zero corner slopes in the "
        "exp-data family");
  }
  // capture by value; DuctProfile holds a shared evaluator
  const DuctProfile prof = profile;
  const double s0 = p.s0, r0 = p.r0;
  InitialData d;
  d.S = [prof, s0, cs, aB](double x) {
    return s0 * std::pow(prof.a(x) / aB, cs);
  };
  d.dS = [prof, s0, cs, aB](double x) {
    return s0 * std::pow(prof.a(x) / aB, cs) * prof.k(x) * cs;
  };
  d.R = [prof, r0, cr, aB](double x) {
    return r0 * std::pow(prof.a(x) / aB, cr);
  };
  d.dR = [prof, r0, cr, aB](double x) {
    return r0 * std::pow(prof.a(x) / aB, cr) * prof.k(x) * cr;
  };
  return d;
}

namespace {

struct DataTable {
  std::shared_ptr<Pchip> S, R;
};

DataTable read_data_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data table: " + path.string());
  std::string line;
  bool header_seen = false;
  std::vector<double> xs, Ss, Rs;
  while (std::getline(in, line)) {
    if (line.rfind("# duct-data v1", 0) == 0) {
      header_seen = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, S, R;
    if (!(ls >> x >> S >> R)) {
      throw std::runtime_error("malformed data table line: " + line);
    }
    xs.push_back(x);
    Ss.push_back(S);
    Rs.push_back(R);
  }
  if (!header_seen) {
    throw std::runtime_error("data table missing '# duct-data v1' header");
  }
  if (xs.size() < 4) throw std::runtime_error("data table needs >= 4 rows");
  DataTable t;
  t.S = std::make_shared<Pchip>(xs, Ss);
  t.R = std::make_shared<Pchip>(std::move(xs), std::move(Rs));
  return t;
}

}  // namespace

InitialData initial_from_table_file(const std::filesystem::path& path) {
  DataTable t = read_data_table(path);
  InitialData d;
  d.S = [p = t.S](double x) { return p->value(x); };
  d.dS = [p = t.S](double x) { return p->derivative(x); };
  d.R = [p = t.R](double x) { return p->value(x); };
  d.dR = [p = t.R](double x) { return p->derivative(x); };
  return d;
}

BoundaryData boundary_from_table_file(const std::filesystem::path& path) {
  DataTable t = read_data_table(path);
  BoundaryData b;
  b.S = [p = t.S](double u) { return p->value(u); };
  b.dS = [p = t.S](double u) { return p->derivative(u); };
  b.R = [p = t.R](double u) { return p->value(u); };
  b.dR = [p = t.R](double u) { return p->derivative(u); };
  return b;
}

}  // namespace ductflow
