// Command-line front end: pattern simulation, width fitting, the Monte Carlo
// trapping oracle, coherence estimates and the blocked-slit prediction.
// Exit codes: 0 success, 1 physics/validation error, 2 precondition error,
// 3 oracle failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../src/format_detail.hpp"
#include "pilotwave/constants.hpp"
#include "pilotwave/core_model.hpp"
#include "pilotwave/estimates.hpp"
#include "pilotwave/fitting.hpp"
#include "pilotwave/kernels.hpp"
#include "pilotwave/montecarlo.hpp"
#include "pilotwave/svg.hpp"
#include "pilotwave/types.hpp"

namespace pw = pilotwave;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = pw::constants::pi;

struct CommonOpts {
  double slit_width = 2e-5;
  double screen_distance = 5.0;
  int n_slits = 1;
  double slit_separation = 0.0;  // 0 resolves to 4 * slit width for n > 1
  double beta_e0 = 0.5;
  double pilot_wavelength = 2e-9;
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--slit-width", o.slit_width, "Slit width a in m")
      ->capture_default_str();
  cmd->add_option("--screen-distance", o.screen_distance,
                  "Slit-to-screen distance D in m")
      ->capture_default_str();
  cmd->add_option("--n-slits", o.n_slits, "Number of slits")
      ->capture_default_str();
  cmd->add_option("--slit-separation", o.slit_separation,
                  "Center-to-center slit separation in m (default 4x width)");
  cmd->add_option("--beta-e0", o.beta_e0, "Thermodynamic coupling beta*E0")
      ->capture_default_str();
  cmd->add_option("--pilot-wavelength", o.pilot_wavelength,
                  "Pilot wavelength in m; k_pilot = 2*pi/lambda")
      ->capture_default_str();
  cmd->add_option("--out", o.out_dir,
                  "Output directory (PILOTWAVE_OUT overrides)")
      ->capture_default_str();
  cmd->add_option("--format", o.formats, "Output formats: csv,json,svg")
      ->delimiter(',')
      ->capture_default_str();
}

struct Resolved {
  pw::ExperimentGeometry geometry;
  pw::BeamThermo thermo;
  double k_pilot;
  fs::path out_dir;
  bool want_csv, want_json, want_svg;
};

Resolved resolve(const CommonOpts& o) {
  Resolved r;
  r.geometry.n_slits = o.n_slits;
  r.geometry.slit_width_a = o.slit_width;
  r.geometry.screen_distance_D = o.screen_distance;
  r.geometry.slit_separation =
      (o.n_slits > 1 && o.slit_separation == 0.0) ? 4.0 * o.slit_width
                                                  : o.slit_separation;
  r.thermo.beta_E0 = o.beta_e0;
  if (!(o.pilot_wavelength > 0.0))
    throw pw::validation_error("pilot wavelength must be positive");
  r.k_pilot = 2.0 * kPi / o.pilot_wavelength;

  const char* env = std::getenv("PILOTWAVE_OUT");
  r.out_dir = (env && *env) ? fs::path(env) : fs::path(o.out_dir);

  r.want_csv = r.want_json = r.want_svg = false;
  for (const auto& f : o.formats) {
    if (f == "csv")
      r.want_csv = true;
    else if (f == "json")
      r.want_json = true;
    else if (f == "svg")
      r.want_svg = true;
    else
      throw pw::precondition_error("unknown format: " + f);
  }

  for (const auto& w : r.thermo.validate()) std::cerr << "warning: " << w << "\n";
  return r;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw pw::validation_error("cannot open for writing: " + path.string());
  f << content;
  if (!f) throw pw::validation_error("write failed: " + path.string());
}

json geometry_json(const pw::ExperimentGeometry& g) {
  return {{"n_slits", g.n_slits},
          {"slit_width_a_m", g.slit_width_a},
          {"slit_separation_m", g.slit_separation},
          {"screen_distance_D_m", g.screen_distance_D},
          {"geometry_factor", g.geometry_factor}};
}

json base_manifest(const char* subcommand, const CommonOpts& o,
                   const Resolved& r) {
  json m;
  m["subcommand"] = subcommand;
  m["geometry"] = geometry_json(r.geometry);
  m["beta_e0"] = r.thermo.beta_E0;
  m["pilot_wavelength_m"] = o.pilot_wavelength;
  m["k_pilot_per_m"] = r.k_pilot;
  m["out_dir"] = r.out_dir.string();
  m["formats"] = o.formats;
  m["kernel_backend"] = pw::kern::active().name;
  return m;
}

void finish_manifest(json& m, const std::vector<std::string>& outputs,
                     const Resolved& r) {
  m["outputs"] = outputs;
  write_file(r.out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string pattern_csv(const pw::PatternPair& p) {
  std::string out = "y_m,theta,radiation,sed\n";
  out.reserve(out.size() + 64 * p.radiation.size());
  for (std::size_t i = 0; i < p.radiation.size(); ++i) {
    pw::detail::append_double(out, p.radiation.positions_y[i]);
    out += ',';
    pw::detail::append_double(out, p.radiation.thetas[i]);
    out += ',';
    pw::detail::append_double(out, p.radiation.values[i]);
    out += ',';
    pw::detail::append_double(out, p.sed.values[i]);
    out += '\n';
  }
  return out;
}

int run_simulate(const CommonOpts& o, int grid_points, double theta_range,
                 bool with_chi2) {
  const Resolved r = resolve(o);
  const pw::GridSpec grid{theta_range, grid_points};
  const pw::PatternPair p =
      pw::generate_pattern(r.geometry, r.thermo, r.k_pilot, grid);

  fs::create_directories(r.out_dir);
  std::vector<std::string> outputs;
  if (r.want_csv) {
    write_file(r.out_dir / "pattern.csv", pattern_csv(p));
    outputs.push_back("pattern.csv");
  }
  if (r.want_svg) {
    std::vector<pw::LineSeries> series = {
        {"radiation", "#1f77b4", p.radiation.positions_y, p.radiation.values},
        {"sed", "#d62728", p.sed.positions_y, p.sed.values}};
    if (with_chi2) {
      std::vector<double> chi2(p.radiation.size());
      double cmax = 0.0;
      for (std::size_t i = 0; i < chi2.size(); ++i) {
        const double d = p.radiation.values[i] - p.sed.values[i];
        chi2[i] = d * d;
        cmax = std::max(cmax, chi2[i]);
      }
      if (cmax > 0.0)
        for (double& v : chi2) v /= cmax;
      series.push_back({"chi2 (scaled)", "#2ca02c", p.radiation.positions_y,
                        std::move(chi2)});
    }
    write_file(r.out_dir / "pattern.svg",
               pw::render_line_plot("Diffraction pattern", "y (m)",
                                    "normalized value", series));
    outputs.push_back("pattern.svg");
  }
  json m = base_manifest("simulate", o, r);
  m["grid_points"] = grid_points;
  m["theta_range"] = theta_range;
  m["with_chi2"] = with_chi2;
  finish_manifest(m, outputs, r);
  std::cout << "simulate: " << p.radiation.size() << " points -> "
            << r.out_dir.string() << "\n";
  return 0;
}

int run_fit(const CommonOpts& o, const pw::FitConfig& cfg) {
  const Resolved r = resolve(o);
  const pw::DistinguishabilityReport rep =
      pw::distinguishability_report(r.geometry, r.thermo, r.k_pilot, cfg);

  fs::create_directories(r.out_dir);
  std::vector<std::string> outputs;
  if (r.want_json) {
    write_file(r.out_dir / "fit_report.json", pw::to_json_string(rep.fit));
    outputs.push_back("fit_report.json");
  }
  if (r.want_csv) {
    std::string csv = "bin_center_theta,chi2\n";
    for (std::size_t i = 0; i < rep.fit.chi2_per_bin.size(); ++i) {
      pw::detail::append_double(csv, rep.fit.bin_center_theta[i]);
      csv += ',';
      pw::detail::append_double(csv, rep.fit.chi2_per_bin[i]);
      csv += '\n';
    }
    write_file(r.out_dir / "chi2_bins.csv", csv);
    outputs.push_back("chi2_bins.csv");
  }
  json m = base_manifest("fit", o, r);
  m["fit_config"] = {{"width_scale_bounds", {cfg.width_scale_lo, cfg.width_scale_hi}},
                     {"tolerance", cfg.tolerance},
                     {"weighting", pw::to_string(cfg.weighting)},
                     {"total_counts", cfg.total_counts},
                     {"bins", cfg.bins},
                     {"theta_range", cfg.theta_range}};
  finish_manifest(m, outputs, r);
  std::cout << "fit: width_scale=" << rep.fit.width_scale
            << " reduction=" << rep.fit.width_reduction_percent
            << "% chi2=" << rep.fit.chi2_total
            << " (pre-fit " << rep.chi2_pre_fit << ")\n";
  return 0;
}

int run_oracle(const CommonOpts& o, long long n_particles, std::uint64_t seed,
               int bins, double expect_beta_e0, int workers) {
  const Resolved r = resolve(o);
  const pw::GridSpec grid{2.0 * kPi, bins};
  const pw::PatternPair p =
      pw::generate_pattern(r.geometry, r.thermo, r.k_pilot, grid);

  pw::EnsembleConfig cfg;
  cfg.n_particles = n_particles;
  cfg.seed = seed;
  cfg.n_position_bins = bins;
  cfg.thermo = r.thermo;
  cfg.well_depth_profile = p.radiation;
  cfg.n_workers = workers;

  const double expect = expect_beta_e0 < 0.0 ? r.thermo.beta_E0 : expect_beta_e0;
  const pw::OracleReport rep = pw::oracle_report(cfg, expect);

  fs::create_directories(r.out_dir);
  std::vector<std::string> outputs;
  if (r.want_csv) {
    write_file(r.out_dir / "oracle.csv", pw::to_csv(rep));
    outputs.push_back("oracle.csv");
  }
  if (r.want_json) {
    write_file(r.out_dir / "oracle_report.json", pw::to_json_string(rep));
    outputs.push_back("oracle_report.json");
  }
  json m = base_manifest("oracle", o, r);
  m["n_particles"] = n_particles;
  m["seed"] = seed;
  m["bins"] = bins;
  m["expect_beta_e0"] = expect;
  m["workers"] = workers;
  finish_manifest(m, outputs, r);
  std::cout << "oracle: max|z|=" << rep.max_abs_z
            << (rep.pass ? " pass" : " FAIL") << "\n";
  return rep.pass ? 0 : 3;
}

int run_coherence(const CommonOpts& o, double bandwidth_hz, double distance_m,
                  double distance_ly, double wavelength_m, double area_m2,
                  double spin_delta_e, double spin_beta) {
  const Resolved r = resolve(o);
  pw::CoherenceInputs in;
  in.bandwidth_hz = bandwidth_hz;
  // explicit meters beat the lightyear default
  in.source_distance_R =
      distance_m > 0.0 ? distance_m : distance_ly * pw::constants::lightyear;
  in.wavelength = wavelength_m;
  in.source_area_S = area_m2;

  const double length = pw::coherence_length(in);
  const pw::CoherenceAreaResult area = pw::coherence_width(in);

  json out;
  out["inputs"] = {{"bandwidth_hz", in.bandwidth_hz},
                   {"source_distance_R_m", in.source_distance_R},
                   {"wavelength_m", in.wavelength},
                   {"source_area_S_m2", in.source_area_S},
                   {"c_m_per_s", in.c}};
  out["coherence_length_m"] = length;
  out["coherence_area_m2"] = area.area;
  out["coherence_width_m"] = area.width;
  if (spin_delta_e >= 0.0 && spin_beta >= 0.0) {
    out["spin_population_ratio"] =
        pw::spin_population_ratio(spin_delta_e, spin_beta);
    out["inputs"]["spin_delta_e_j"] = spin_delta_e;
    out["inputs"]["spin_beta_per_j"] = spin_beta;
  }
  std::cout << out.dump(2) << "\n";

  fs::create_directories(r.out_dir);
  json m = base_manifest("coherence", o, r);
  m["coherence_inputs"] = out["inputs"];
  finish_manifest(m, {}, r);
  return 0;
}

int run_predict_blocked(const CommonOpts& o, int grid_points,
                        double theta_range) {
  const Resolved r = resolve(o);
  const pw::GridSpec grid{theta_range, grid_points};
  const pw::BlockedSlitPrediction pred =
      pw::predict_blocked_slit(r.geometry, r.thermo, r.k_pilot, grid);

  fs::create_directories(r.out_dir);
  std::vector<std::string> outputs;
  if (r.want_csv) {
    std::string csv = "y_m,theta,sed_prediction,orthodox_prediction\n";
    const auto& s = pred.sed_prediction;
    for (std::size_t i = 0; i < s.size(); ++i) {
      pw::detail::append_double(csv, s.positions_y[i]);
      csv += ',';
      pw::detail::append_double(csv, s.thetas[i]);
      csv += ',';
      pw::detail::append_double(csv, s.values[i]);
      csv += ',';
      pw::detail::append_double(csv, pred.orthodox_prediction.values[i]);
      csv += '\n';
    }
    write_file(r.out_dir / "blocked.csv", csv);
    outputs.push_back("blocked.csv");
  }
  if (r.want_svg) {
    write_file(r.out_dir / "blocked.svg",
               pw::render_line_plot(
                   "Blocked-slit predictions", "y (m)", "probability",
                   {{"sed_prediction", "#d62728", pred.sed_prediction.positions_y,
                     pred.sed_prediction.values},
                    {"orthodox_prediction", "#1f77b4",
                     pred.orthodox_prediction.positions_y,
                     pred.orthodox_prediction.values}}));
    outputs.push_back("blocked.svg");
  }
  json m = base_manifest("predict-blocked", o, r);
  m["grid_points"] = grid_points;
  m["theta_range"] = theta_range;
  finish_manifest(m, outputs, r);
  std::cout << "predict-blocked: " << pred.sed_prediction.size()
            << " points -> " << r.out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SED pilot-wave diffraction toolkit"};
  app.require_subcommand(1);

  CommonOpts sim_o, fit_o, ora_o, coh_o, blk_o;

  auto* sim = app.add_subcommand("simulate",
                                 "Radiation and trapping curves on a grid");
  add_common(sim, sim_o);
  int sim_points = 2001;
  double sim_range = 3.0 * kPi;
  bool sim_chi2 = false;
  sim->add_option("--grid-points", sim_points, "Grid size")->capture_default_str();
  sim->add_option("--theta-range", sim_range, "Half-width of theta window")
      ->capture_default_str();
  sim->add_flag("--with-chi2", sim_chi2, "Overlay per-bin squared deviation");

  auto* fit = app.add_subcommand("fit", "Fit the radiation model's slit width "
                                        "to the trapping curve");
  add_common(fit, fit_o);
  pw::FitConfig fit_cfg;
  std::vector<double> fit_bounds = {fit_cfg.width_scale_lo, fit_cfg.width_scale_hi};
  std::string fit_weighting = "poisson";
  fit->add_option("--grid-points", fit_cfg.bins, "Fit bins (odd)")
      ->capture_default_str();
  fit->add_option("--theta-range", fit_cfg.theta_range,
                  "Half-width of the fitted theta window")
      ->capture_default_str();
  fit->add_option("--weighting", fit_weighting, "uniform or poisson")
      ->capture_default_str();
  fit->add_option("--total-counts", fit_cfg.total_counts,
                  "Total counts for Poisson weights")
      ->capture_default_str();
  fit->add_option("--bounds", fit_bounds, "Width-scale bounds lo hi")
      ->expected(2);
  fit->add_option("--tol", fit_cfg.tolerance, "Width-scale tolerance")
      ->capture_default_str();

  auto* ora = app.add_subcommand("oracle",
                                 "Monte Carlo trapping consistency check");
  add_common(ora, ora_o);
  long long ora_particles = 1'000'000;
  std::uint64_t ora_seed = 42;
  int ora_bins = 201, ora_workers = 1;
  double ora_expect = -1.0;
  ora->add_option("--n-particles", ora_particles, "Ensemble size")
      ->capture_default_str();
  ora->add_option("--seed", ora_seed, "RNG seed")->capture_default_str();
  ora->add_option("--bins", ora_bins, "Histogram bins")->capture_default_str();
  ora->add_option("--expect-beta-e0", ora_expect,
                  "Coupling assumed by the expectation (default: --beta-e0)");
  ora->add_option("--workers", ora_workers, "Worker threads")
      ->capture_default_str();

  auto* coh = app.add_subcommand("coherence",
                                 "Coherence length/width and spin estimates");
  add_common(coh, coh_o);
  double coh_bw = 2.998e8, coh_dist_m = 0.0, coh_dist_ly = 1e9;
  double coh_wl = 5e-12, coh_area = 1e-20;
  double coh_spin_de = -1.0, coh_spin_beta = -1.0;
  coh->add_option("--bandwidth-hz", coh_bw, "Spectral bandwidth")
      ->capture_default_str();
  coh->add_option("--source-distance-m", coh_dist_m, "Source distance in m");
  coh->add_option("--source-distance-ly", coh_dist_ly,
                  "Source distance in lightyears")
      ->capture_default_str();
  coh->add_option("--wavelength-m", coh_wl, "Wavelength")->capture_default_str();
  coh->add_option("--source-area-m2", coh_area, "Source area")
      ->capture_default_str();
  coh->add_option("--spin-delta-e-j", coh_spin_de, "Spin level splitting in J");
  coh->add_option("--spin-beta-per-j", coh_spin_beta,
                  "Inverse temperature in 1/J");

  auto* blk = app.add_subcommand("predict-blocked",
                                 "Blocked-slit predictions for both models");
  blk_o.n_slits = 2;
  add_common(blk, blk_o);
  int blk_points = 2001;
  double blk_range = 3.0 * kPi;
  blk->add_option("--grid-points", blk_points, "Grid size")->capture_default_str();
  blk->add_option("--theta-range", blk_range, "Half-width of theta window")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(sim_o, sim_points, sim_range, sim_chi2);
    if (fit->parsed()) {
      if (fit_weighting == "uniform")
        fit_cfg.weighting = pw::Weighting::uniform;
      else if (fit_weighting == "poisson")
        fit_cfg.weighting = pw::Weighting::poisson;
      else
        throw pw::precondition_error("unknown weighting: " + fit_weighting);
      fit_cfg.width_scale_lo = fit_bounds[0];
      fit_cfg.width_scale_hi = fit_bounds[1];
      return run_fit(fit_o, fit_cfg);
    }
    if (ora->parsed())
      return run_oracle(ora_o, ora_particles, ora_seed, ora_bins, ora_expect,
                        ora_workers);
    if (coh->parsed()) {
      if (coh_dist_m > 0.0) coh_dist_ly = 0.0;  // explicit meters win
      return run_coherence(coh_o, coh_bw, coh_dist_m, coh_dist_ly, coh_wl,
                           coh_area, coh_spin_de, coh_spin_beta);
    }
    if (blk->parsed()) {
      if (blk_o.n_slits != 2)
        throw pw::precondition_error(
            "blocked-slit prediction requires a two-slit geometry");
      return run_predict_blocked(blk_o, blk_points, blk_range);
    }
  } catch (const pw::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
