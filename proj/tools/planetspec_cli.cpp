// planetspec command-line front end. Exit status: 0 success, 1 domain or
// convergence failure, 2 usage or I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "planetspec/common.hpp"
#include "planetspec/disk.hpp"
#include "planetspec/modesum.hpp"
#include "planetspec/profile.hpp"
#include "planetspec/profile_io.hpp"
#include "planetspec/report_io.hpp"
#include "planetspec/scattering.hpp"
#include "planetspec/spectrum.hpp"

using namespace planetspec;
using nlohmann::json;

namespace {

struct Config {
  std::string profile, profile_s, out, format = "json", cache;
  double cutoff = 10.0;
  double tol = 0.0;  // 0 keeps each command's default
  int lmax = 200;
  double omegamax = 200.0;
  std::optional<double> sigma;  // unset: 1e-3 times the shortest basic length
  double t0 = 0.0, t1 = 0.0;
  std::size_t points = 0;
  int qmax = 50;
  int winding = 12;
  int max_legs = 12;
  bool harmonics = false;
  std::size_t interface = 0;
  int k = 1, w = 1;
  std::size_t count = 40;
  std::size_t target = 10000;
};

void emit(const Config& cfg, const std::string& text, const std::string& suffix = "") {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return;
  }
  const std::string path = cfg.out + suffix;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
  if (!f) throw InvalidArgument("write failed: " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool csv(const Config& cfg) { return cfg.format == "csv"; }

SpectrumOptions spectrum_options(const Config& cfg) {
  SpectrumOptions o;
  o.max_legs = cfg.max_legs;
  o.max_winding = cfg.winding;
  o.harmonics = cfg.harmonics;
  if (cfg.tol > 0) o.closure_tol = cfg.tol;
  return o;
}

int cmd_profile_check(const Config& cfg) {
  const auto P = load_profile(cfg.profile);
  const auto smooth = check_smooth_herglotz(P);
  const auto dist = check_distributional_herglotz(P);
  json j = {{"profile_hash", P.hash()}, {"smooth", to_json(smooth)}, {"distributional", to_json(dist)},
            {"tolerances", {{"grid_points", 512}}}};
  emit(cfg, dump(j));
  return smooth.passed ? 0 : 1;
}

int cmd_blsp(const Config& cfg) {
  const auto P = load_profile(cfg.profile);
  const auto opt = spectrum_options(cfg);
  if (!cfg.profile_s.empty()) {
    const auto S = load_profile(cfg.profile_s);
    const auto spec = blsp_two_speeds(P, S, cfg.cutoff, opt);
    json j = to_json(spec);
    j["cutoff"] = cfg.cutoff;
    j["tolerances"] = {{"closure_tol", opt.closure_tol}, {"dedupe_rel", opt.dedupe_rel}};
    emit(cfg, csv(cfg) ? two_speed_csv(spec) : dump(j));
    return spec.failures.empty() ? 0 : 1;
  }
  const auto spec = blsp(P, cfg.cutoff, opt);
  emit(cfg, csv(cfg) ? spectrum_csv(spec) : dump(to_json(spec)));
  return spec.failures.empty() ? 0 : 1;
}

int cmd_trace_amplitudes(const Config& cfg) {
  const auto P = load_profile(cfg.profile);
  auto opt = spectrum_options(cfg);
  const auto spec = blsp(P, cfg.cutoff, opt);
  std::vector<AmplitudeRow> rows;
  std::vector<TraceSingularity> ok;
  bool flagged = !spec.failures.empty();
  for (const auto& e : spec.entries)
    for (const auto& ray : e.rays) {
      AmplitudeRow row{ray, std::nullopt, {}};
      try {
        row.value = trace_amplitude(ray, P, {}, opt.pcc_tol);
        ok.push_back(*row.value);
      } catch (const DomainError& ex) {
        row.error = ex.what();
        flagged = true;
      }
      rows.push_back(std::move(row));
    }
  const auto inj = injectivity_check(ok);
  if (csv(cfg)) {
    emit(cfg, amplitudes_csv(rows));
  } else {
    json j = {{"cutoff", cfg.cutoff},
              {"normalization", "amplitudes exclude the class-independent constant; compare ratios"},
              {"tolerances", {{"closure_tol", opt.closure_tol}, {"pcc_tol", opt.pcc_tol},
                              {"period_tol", 1e-9}, {"amp_tol", 1e-9}}},
              {"rows", to_json(rows)},
              {"injectivity", to_json(inj)},
              {"failures", json::array()}};
    for (const auto& f : spec.failures)
      j["failures"].push_back({{"layer", f.layer}, {"N", f.N}, {"m", f.m}, {"message", f.message}});
    emit(cfg, dump(j));
  }
  return flagged ? 1 : 0;
}

// Mode table, reused from the cache file when it was computed for the same
// profile with limits that cover the request.
ModeTable load_or_compute_modes(const Config& cfg, const LayeredProfile& P, bool& cache_hit) {
  cache_hit = false;
  if (!cfg.cache.empty()) {
    std::ifstream f(cfg.cache);
    if (f) {
      ModeTable t;
      try {
        t = read_modes_csv(f);
      } catch (const InvalidArgument&) {
        t.profile_hash = 0;  // unreadable cache: recompute and overwrite
      }
      if (t.profile_hash == P.hash() && t.omega_max >= cfg.omegamax && t.l_max >= cfg.lmax) {
        ModeTable sub = t;
        sub.entries.clear();
        for (const auto& e : t.entries)
          if (e.l <= cfg.lmax && e.omega <= cfg.omegamax) sub.entries.push_back(e);
        sub.omega_max = cfg.omegamax;
        sub.l_max = cfg.lmax;
        cache_hit = true;
        return sub;
      }
    }
  }
  auto t = wkb_eigenfrequencies(P, cfg.lmax, cfg.omegamax);
  if (!cfg.cache.empty()) {
    std::ofstream f(cfg.cache, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write cache " + cfg.cache);
    write_modes_csv(f, t);
  }
  return t;
}

int cmd_modesum(const Config& cfg) {
  if (cfg.sigma && !(*cfg.sigma > 0)) throw InvalidArgument("--sigma must be positive");
  if (cfg.lmax < 0 || !(cfg.omegamax > 0)) throw InvalidArgument("--lmax and --omegamax must be positive");
  const auto P = load_profile(cfg.profile);
  bool hit = false;
  const auto modes = load_or_compute_modes(cfg, P, hit);
  if (modes.entries.empty()) throw DomainError("no modes below omega_max");

  const auto spec = blsp(P, cfg.cutoff, spectrum_options(cfg));
  std::vector<double> candidates;
  for (const auto& e : spec.entries) candidates.push_back(e.T);
  if (!cfg.sigma && candidates.empty()) throw InvalidArgument("--sigma needed when no basic ray is below the cutoff");
  const double sigma = cfg.sigma ? *cfg.sigma : 1e-3 * candidates.front();
  const double t0 = cfg.t0 > 0 ? cfg.t0 : 0.5 * (candidates.empty() ? 1.0 : candidates.front());
  const double t1 = cfg.t1 > t0 ? cfg.t1 : cfg.cutoff;
  // Ten samples per sigma resolves every peak of the smoothed trace.
  const std::size_t points =
      cfg.points ? cfg.points : static_cast<std::size_t>(std::ceil((t1 - t0) / (0.1 * sigma))) + 1;
  const auto trace = trace_series(modes, t0, t1, points, sigma);
  const double window = 2.0 * sigma;
  const auto matches = detect_peaks(trace, candidates, window);
  // Side lobes of one smoothed singularity sit about 2.3 sigma from its main lobe.
  auto peaks = find_peaks(trace, 3.0 * sigma);
  if (peaks.size() > 10) peaks.resize(10);

  json top = json::array();
  for (const auto& pk : peaks) top.push_back({{"t", pk.t}, {"height", pk.height}, {"prominence", pk.prominence}});
  json report = {{"profile_hash", P.hash()},
                 {"modes", modes.entries.size()},
                 {"mode_failures", modes.failures.size()},
                 {"skipped_orders", modes.skipped},
                 {"cache", cfg.cache.empty() ? "off" : (hit ? "hit" : "miss")},
                 {"tolerances", {{"sigma", sigma}, {"window", window}, {"t0", t0}, {"t1", t1},
                                 {"points", points}, {"l_max", cfg.lmax}, {"omega_max", cfg.omegamax}}},
                 {"candidates", to_json(matches)},
                 {"top_peaks", top}};

  if (cfg.out.empty() || cfg.out == "-") {
    emit(cfg, dump(report));
  } else {
    std::ostringstream m;
    write_modes_csv(m, modes);
    emit(cfg, m.str(), ".modes.csv");
    emit(cfg, trace_csv(trace), ".trace.csv");
    emit(cfg, dump(report), ".peaks.json");
  }
  return modes.failures.empty() ? 0 : 1;
}

int cmd_disk(const Config& cfg) {
  if (cfg.qmax < 2) throw InvalidArgument("--qmax must be at least 2");
  if (cfg.winding < 1) throw InvalidArgument("--winding must be positive");
  const auto rep = simple_lsp_scan(cfg.qmax, cfg.winding);
  emit(cfg, csv(cfg) ? disk_csv(rep) : dump(to_json(rep)));
  return rep.pairwise_distinct && rep.probe_disagreements == 0 ? 0 : 1;
}

int cmd_gliding(const Config& cfg) {
  const auto P = load_profile(cfg.profile);
  if (cfg.interface >= P.num_interfaces()) throw InvalidArgument("--interface out of range");
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-13;
  const auto seq = gliding_approximation(P, cfg.interface, {cfg.k, cfg.w}, cfg.count, tol);
  std::optional<GlidingDecay> decay;
  if (seq.rays.size() >= 8) decay = gliding_amplitude_decay(seq, P, cfg.target);
  if (csv(cfg)) {
    emit(cfg, gliding_csv(seq, decay ? &*decay : nullptr));
  } else {
    json j = to_json(seq);
    j["tolerances"] = {{"tol", tol}};
    if (decay) j["decay"] = to_json(*decay);
    emit(cfg, dump(j));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length spectra, trace amplitudes and mode sums for radial profiles"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output path (stdout when omitted)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--profile", cfg.profile, "Profile JSON")->required();
  };
  auto add_spectrum = [&](CLI::App* sub) {
    sub->add_option("--cutoff", cfg.cutoff, "Largest period");
    sub->add_option("--tol", cfg.tol, "Closure tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-legs", cfg.max_legs, "Largest leg count N")->check(CLI::PositiveNumber);
    sub->add_option("--winding", cfg.winding, "Largest winding number")->check(CLI::PositiveNumber);
    sub->add_flag("--harmonics", cfg.harmonics, "Include repetitions of primitive rays");
  };

  auto* check = app.add_subcommand("profile-check", "Herglotz checks");
  add_profile(check);
  add_common(check);

  auto* bl = app.add_subcommand("blsp", "Basic length spectrum");
  add_profile(bl);
  add_spectrum(bl);
  add_common(bl);
  bl->add_option("--profile-s", cfg.profile_s, "Second wave speed (tagged two-speed spectrum)");

  auto* amp = app.add_subcommand("trace-amplitudes", "Leading trace singularities of basic rays");
  add_profile(amp);
  add_spectrum(amp);
  add_common(amp);

  auto* ms = app.add_subcommand("modesum", "WKB modes, smoothed trace and peak matching");
  add_profile(ms);
  add_spectrum(ms);
  add_common(ms);
  ms->add_option("--lmax", cfg.lmax, "Largest angular order");
  ms->add_option("--omegamax", cfg.omegamax, "Largest frequency");
  ms->add_option("--sigma", cfg.sigma, "Gaussian smoothing width (default 1e-3 times the shortest basic length)");
  ms->add_option("--t0", cfg.t0, "Trace window start");
  ms->add_option("--t1", cfg.t1, "Trace window end (default: cutoff)");
  ms->add_option("--points", cfg.points, "Trace samples");
  ms->add_option("--cache", cfg.cache, "Mode table cache file");

  auto* dk = app.add_subcommand("disk", "Unit-disk length simplicity scan");
  add_common(dk);
  dk->add_option("--qmax", cfg.qmax, "Largest chord count q");
  dk->add_option("--winding", cfg.winding, "Largest harmonic");

  auto* gl = app.add_subcommand("gliding", "Head-wave approximants and amplitude decay");
  add_profile(gl);
  add_common(gl);
  gl->add_option("--interface", cfg.interface, "Interface index, outermost 0");
  gl->add_option("--k", cfg.k, "Up-legs per period")->check(CLI::PositiveNumber);
  gl->add_option("--w", cfg.w, "Winding number")->check(CLI::PositiveNumber);
  gl->add_option("--count", cfg.count, "Number of approximants");
  gl->add_option("--target", cfg.target, "Index used for the tail estimate");
  gl->add_option("--tol", cfg.tol, "Root tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_profile_check(cfg);
    if (*bl) return cmd_blsp(cfg);
    if (*amp) return cmd_trace_amplitudes(cfg);
    if (*ms) return cmd_modesum(cfg);
    if (*dk) return cmd_disk(cfg);
    if (*gl) return cmd_gliding(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
