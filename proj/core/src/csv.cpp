#include "ductflow/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ductflow {

namespace {

std::string format_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::filesystem::path write_snapshot_csv(const std::filesystem::path& dir,
                                         const FieldSnapshot& snap,
                                         const Grid& grid,
                                         const GasParameters& gas) {
  const std::filesystem::path path =
      dir / ("snap_t" + format_short(snap.t) + ".csv");
  std::ofstream out = open_out(path);
  out << "x,rho,v,S,R,xi\n";
  const DerivedFields f = derive_fields(snap, gas);
  for (std::size_t i = 0; i < snap.rho.size(); ++i) {
    out << format_double(grid.x(static_cast<int>(i))) << ','
        << format_double(snap.rho[i]) << ',' << format_double(snap.v[i]) << ','
        << format_double(f.S[i]) << ',' << format_double(f.R[i]) << ','
        << format_double(f.xi[i]) << '\n';
  }
  return path;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagRow> rows) {
  std::ofstream out = open_out(path);
  out << "t,sup_rho,sup_v,sup_rho_x,sup_v_x,min_S,max_R,sup_xi\n";
  for (const DiagRow& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.sup_rho) << ','
        << format_double(r.sup_v) << ',' << format_double(r.sup_rho_x) << ','
        << format_double(r.sup_v_x) << ',' << format_double(r.min_S) << ','
        << format_double(r.max_R) << ',' << format_double(r.sup_xi) << '\n';
  }
}

void write_claims_csv(const std::filesystem::path& path,
                      std::span<const ClaimReport> claims) {
  std::ofstream out = open_out(path);
  out << "claim_id,pass,worst_margin,x,t\n";
  for (const ClaimReport& c : claims) {
    out << c.claim_id << ',' << (c.pass ? 1 : 0) << ','
        << format_double(c.worst_margin) << ',' << format_double(c.x) << ','
        << format_double(c.t) << '\n';
  }
}

std::vector<ClaimReport> read_claims_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<ClaimReport> claims;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ClaimReport c;
    std::string field;
    std::getline(ls, c.claim_id, ',');
    std::getline(ls, field, ',');
    c.pass = field == "1";
    std::getline(ls, field, ',');
    c.worst_margin = std::stod(field);
    std::getline(ls, field, ',');
    c.x = std::stod(field);
    std::getline(ls, field, ',');
    c.t = std::stod(field);
    claims.push_back(std::move(c));
  }
  return claims;
}

std::filesystem::path write_trace_csv(const std::filesystem::path& dir,
                                      const CurveTrace& trace, double x0,
                                      double t0) {
  const char* family = trace.family == TraceFamily::One   ? "1"
                       : trace.family == TraceFamily::Two ? "2"
                                                          : "particle";
  const std::filesystem::path path =
      dir / ("trace_" + std::string(family) + "_" + format_short(x0) + "_" +
             format_short(t0) + ".csv");
  std::ofstream out = open_out(path);
  out << "t,x,S,R,xi\n";
  for (const TracePoint& p : trace.points) {
    out << format_double(p.t) << ',' << format_double(p.x) << ','
        << format_double(p.S) << ',' << format_double(p.R) << ','
        << format_double(p.xi) << '\n';
  }
  return path;
}

SnapshotSet read_snapshots(const std::filesystem::path& dir) {
  SnapshotSet set;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snap_t", 0) != 0 || entry.path().extension() != ".csv") {
      continue;
    }
    const std::string tstr = name.substr(6, name.size() - 6 - 4);
    FieldSnapshot snap;
    snap.t = std::stod(tstr);
    std::ifstream in(entry.path());
    if (!in) throw std::runtime_error("cannot read " + entry.path().string());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string field;
      double cols[6];
      for (double& c : cols) {
        if (!std::getline(ls, field, ',')) {
          throw std::runtime_error("malformed snapshot row in " + name);
        }
        c = std::stod(field);
      }
      snap.rho.push_back(cols[1]);
      snap.v.push_back(cols[2]);
    }
    set.snapshots.push_back(std::move(snap));
  }
  std::sort(set.snapshots.begin(), set.snapshots.end(),
            [](const FieldSnapshot& a, const FieldSnapshot& b) {
              return a.t < b.t;
            });
  return set;
}

}  // namespace ductflow
