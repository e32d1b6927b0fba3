#include "planetspec/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "planetspec/common.hpp"

namespace planetspec {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  // Shortest precision that reads back to the same value.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

namespace {

std::string rational_str(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json tolerances(const SpectrumOptions& o) {
  return {{"max_legs", o.max_legs},     {"max_winding", o.max_winding}, {"harmonics", o.harmonics},
          {"closure_tol", o.closure_tol}, {"dedupe_rel", o.dedupe_rel}, {"pcc_tol", o.pcc_tol},
          {"leg_tol", o.leg_tol},       {"scan_points", o.scan_points}};
}

json failures_json(const std::vector<EnumerationFailure>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back({{"layer", f.layer}, {"N", f.N}, {"m", f.m}, {"message", f.message}});
  return out;
}

json entry_json(const SpectrumEntry& e) {
  json rays = json::array();
  for (const auto& r : e.rays) rays.push_back(to_json(r));
  return {{"T", e.T}, {"multiplicity", e.multiplicity}, {"rays", rays}};
}

}  // namespace

json to_json(const HerglotzReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"r", x.radius}, {"drho", x.drho}});
  json j = {{"passed", r.passed}, {"min_margin", r.min_margin}, {"violations", v}};
  if (!r.regularity_note.empty()) j["regularity_note"] = r.regularity_note;
  return j;
}

json to_json(const DistributionalHerglotzReport& r) {
  json v = json::array();
  for (const auto& x : r.jump_signs)
    v.push_back({{"interface", x.interface},
                 {"r", x.radius},
                 {"rho_below", x.rho_below},
                 {"rho_above", x.rho_above},
                 {"positive", x.positive}});
  return {{"smooth_ok", r.smooth_ok}, {"passed", r.passed}, {"jumps", v}};
}

json to_json(const PeriodicBasicRay& r) {
  return {{"layer", r.layer},   {"kind", to_string(r.kind)}, {"p", r.p},
          {"N", r.N},           {"m", r.m},                  {"harmonic", r.harmonic},
          {"T", r.T},           {"alpha", r.alpha},          {"dalpha_dp", r.dalpha_dp},
          {"leg_time", r.leg_time}, {"r_star", r.r_star},    {"conjugacy_ok", r.conjugacy_ok}};
}

json to_json(const Spectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(entry_json(e));
  return {{"cutoff", s.cutoff},
          {"tolerances", tolerances(s.options)},
          {"entries", entries},
          {"failures", failures_json(s.failures)}};
}

json to_json(const TwoSpeedSpectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries) {
    json j = entry_json(e.entry);
    j["source"] = e.source;
    entries.push_back(j);
  }
  json col = json::array();
  for (const auto& c : s.collisions) col.push_back({{"T_P", c.T_P}, {"T_S", c.T_S}});
  return {{"entries", entries}, {"collisions", col}, {"failures", failures_json(s.failures)}};
}

json to_json(const TraceSingularity& s) {
  return {{"T", s.T},
          {"order", rational_str(s.order)},
          {"amplitude", complex_json(s.amplitude)},
          {"principal", complex_json(s.principal)},
          {"kmah", rational_str(s.kmah)},
          {"n", s.n},
          {"Q", complex_json(s.Q)},
          {"L", s.L},
          {"degenerate", s.degenerate},
          {"class", s.class_key},
          {"note", s.note}};
}

json to_json(const InjectivityReport& r) {
  json groups = json::array();
  for (const auto& g : r.groups) groups.push_back({{"T", g.T}, {"members", g.members}});
  json viol = json::array();
  for (const auto& v : r.violations) viol.push_back({{"a", v.a}, {"b", v.b}, {"T", v.T}});
  return {{"passed", r.passed}, {"groups", groups}, {"violations", viol}};
}

json to_json(const std::vector<AmplitudeRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json j = {{"ray", to_json(row.ray)}};
    if (row.value) j["singularity"] = to_json(*row.value);
    if (!row.error.empty()) j["error"] = row.error;
    out.push_back(j);
  }
  return out;
}

json to_json(const LspScanReport& r) {
  json chords = json::array();
  for (const auto& c : r.chords)
    chords.push_back({{"p", c.p}, {"q", c.q}, {"length", c.length}, {"exact", c.exact}, {"decimal", c.decimal}});
  json pairs = json::array();
  for (const auto& p : r.rational_pairs) pairs.push_back({{"i", p.i}, {"j", p.j}, {"ratio", p.ratio.str()}});
  json co = json::array();
  for (const auto& c : r.coincidences)
    co.push_back({{"i", c.i}, {"j", c.j}, {"k_i", c.k_i}, {"k_j", c.k_j}, {"length", c.length}});
  return {{"q_max", r.q_max},
          {"winding_max", r.winding_max},
          {"pairwise_distinct", r.pairwise_distinct},
          {"pairs_checked", r.pairs_checked},
          {"probe_disagreements", r.probe_disagreements},
          {"probe_denominator_bound", 1000000},
          {"chords", chords},
          {"rational_pairs", pairs},
          {"coincidences", co}};
}

json to_json(const GlidingSequence& s) {
  json rays = json::array();
  for (const auto& a : s.rays)
    rays.push_back({{"m", a.m},         {"p", a.p},         {"theta", a.theta},
                    {"kappa", a.kappa}, {"T", a.T},         {"alpha_up", a.alpha_up},
                    {"phi", a.phi},     {"dalpha_dp", a.dalpha_dp}, {"beta_below", a.beta_below}});
  return {{"interface", s.interface}, {"k", s.spec.k},         {"w", s.spec.w},
          {"p0", s.p0},               {"theta0", s.theta0},    {"Theta_H", s.Theta_H},
          {"T_limit", s.T_limit},     {"kappa_exponent", s.kappa_exponent},
          {"warnings", s.warnings},   {"rays", rays}};
}

json to_json(const GlidingDecay& d) {
  return {{"exponent", d.exponent},       {"intercept", d.intercept},
          {"max_m_beta", d.max_m_beta},   {"partial_sum", d.partial_sum},
          {"tail_estimate", d.tail_estimate}, {"target", d.target}};
}

json to_json(const std::vector<PeakMatch>& matches) {
  json out = json::array();
  for (const auto& m : matches)
    out.push_back({{"candidate", m.candidate},
                   {"covered", m.covered},
                   {"matched", m.matched},
                   {"offset", m.offset},
                   {"prominence", m.prominence}});
  return out;
}

namespace {

void ray_cells(std::ostringstream& os, const PeriodicBasicRay& r) {
  os << r.layer << ',' << to_string(r.kind) << ',' << r.N << ',' << r.m << ',' << r.harmonic << ','
     << format_double(r.p) << ',' << format_double(r.T) << ',' << format_double(r.dalpha_dp);
}

}  // namespace

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "# cutoff=" << format_double(s.cutoff) << " closure_tol=" << format_double(s.options.closure_tol)
     << " dedupe_rel=" << format_double(s.options.dedupe_rel) << '\n';
  os << "T,multiplicity,layer,kind,N,m,harmonic,p\n";
  for (const auto& e : s.entries) {
    const auto& r = e.rays.front();
    os << format_double(e.T) << ',' << e.multiplicity << ',' << r.layer << ',' << to_string(r.kind) << ','
       << r.N << ',' << r.m << ',' << r.harmonic << ',' << format_double(r.p) << '\n';
  }
  return os.str();
}

std::string two_speed_csv(const TwoSpeedSpectrum& s) {
  std::ostringstream os;
  os << "source,T,multiplicity\n";
  for (const auto& e : s.entries)
    os << e.source << ',' << format_double(e.entry.T) << ',' << e.entry.multiplicity << '\n';
  return os.str();
}

std::string amplitudes_csv(const std::vector<AmplitudeRow>& rows) {
  std::ostringstream os;
  os << "layer,kind,N,m,harmonic,p,T,dalpha_dp,amp_re,amp_im,kmah,n,degenerate,status\n";
  for (const auto& row : rows) {
    ray_cells(os, row.ray);
    if (row.value) {
      const auto& v = *row.value;
      os << ',' << format_double(v.amplitude.real()) << ',' << format_double(v.amplitude.imag()) << ','
         << rational_str(v.kmah) << ',' << v.n << ',' << (v.degenerate ? 1 : 0) << ",ok\n";
    } else {
      os << ",,,,,,flagged\n";
    }
  }
  return os.str();
}

std::string trace_csv(const SmoothedTrace& t) {
  std::ostringstream os;
  os << "# sigma=" << format_double(t.sigma) << " dt=" << format_double(t.dt) << '\n';
  os << "t,Z\n";
  for (std::size_t i = 0; i < t.values.size(); ++i)
    os << format_double(t.t(i)) << ',' << format_double(t.values[i]) << '\n';
  return os.str();
}

std::string gliding_csv(const GlidingSequence& s, const GlidingDecay* decay) {
  std::ostringstream os;
  os << "m,p,theta,kappa,T,T_limit_minus_T" << (decay ? ",abs_a" : "") << '\n';
  for (std::size_t i = 0; i < s.rays.size(); ++i) {
    const auto& a = s.rays[i];
    os << a.m << ',' << format_double(a.p) << ',' << format_double(a.theta) << ',' << format_double(a.kappa)
       << ',' << format_double(a.T) << ',' << format_double(s.T_limit - a.T);
    if (decay && i < decay->a.size()) os << ',' << format_double(std::abs(decay->a[i]));
    os << '\n';
  }
  return os.str();
}

std::string disk_csv(const LspScanReport& r) {
  std::ostringstream os;
  os << "p,q,length,exact\n";
  for (const auto& c : r.chords) os << c.p << ',' << c.q << ',' << c.decimal << ',' << c.exact << '\n';
  return os.str();
}

void write_modes_csv(std::ostream& os, const ModeTable& t) {
  os << "# planetspec-modes hash=" << hex64(t.profile_hash) << " omega_max=" << format_double(t.omega_max)
     << " l_max=" << t.l_max << '\n';
  os << "n,l,omega\n";
  for (const auto& e : t.entries) os << e.n << ',' << e.l << ',' << format_double(e.omega) << '\n';
}

ModeTable read_modes_csv(std::istream& is) {
  ModeTable t;
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("mode table: empty input");
  char hash[17] = {};
  double wmax = 0.0;
  int lmax = 0;
  if (std::sscanf(line.c_str(), "# planetspec-modes hash=%16s omega_max=%lf l_max=%d", hash, &wmax, &lmax) != 3)
    throw InvalidArgument("mode table: bad header");
  t.profile_hash = std::strtoull(hash, nullptr, 16);
  t.omega_max = wmax;
  t.l_max = lmax;
  if (!std::getline(is, line) || line != "n,l,omega") throw InvalidArgument("mode table: bad column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ModeEntry e;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &e.n, &e.l, &e.omega) != 3)
      throw InvalidArgument("mode table: bad row '" + line + "'");
    t.entries.push_back(e);
  }
  return t;
}

}  // namespace planetspec
