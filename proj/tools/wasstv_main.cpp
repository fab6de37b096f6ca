// Command-line driver: mask generation, undersampled reconstruction
// (zero-filling / TV / transport-prior), pinned-endpoint transport
// geodesics, and image-quality reports.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wasstv/baseline.hpp"
#include "wasstv/diffops.hpp"
#include "wasstv/forward.hpp"
#include "wasstv/grid.hpp"
#include "wasstv/image_io.hpp"
#include "wasstv/metrics.hpp"
#include "wasstv/phantom.hpp"
#include "wasstv/solver.hpp"
#include "wasstv/transport.hpp"

namespace fs = std::filesystem;
using namespace wasstv;

namespace {

// All outputs go to <path>.tmp first and are renamed together once the
// whole command has succeeded, so a failing run never leaves partial files.
class StagedOutputs {
 public:
  std::string stage(const fs::path& final_path) {
    staged_.push_back(final_path);
    return (final_path.string() + ".tmp");
  }
  void commit() {
    for (const auto& p : staged_) fs::rename(p.string() + ".tmp", p);
    staged_.clear();
  }
  ~StagedOutputs() {
    for (const auto& p : staged_) {
      std::error_code ec;
      fs::remove(p.string() + ".tmp", ec);
    }
  }

 private:
  std::vector<fs::path> staged_;
};

// Plain key=value configuration for a subcommand. Flags given on the
// command line keep precedence: keys whose options were already set are
// skipped, everything else falls back to the file, then to the defaults.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                 ": expected key=value");
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (!opt)
      throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("expected key=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

DeformationSpec parse_warp(const std::string& s, std::uint64_t seed) {
  DeformationSpec spec;
  spec.seed = seed;
  for (const auto& [k, v] : parse_kv(s)) {
    if (k == "amp") spec.amp_x = spec.amp_y = std::stod(v);
    else if (k == "amp_x") spec.amp_x = std::stod(v);
    else if (k == "amp_y") spec.amp_y = std::stod(v);
    else if (k == "freq") spec.freq_x = spec.freq_y = std::stoi(v);
    else if (k == "freq_x") spec.freq_x = std::stoi(v);
    else if (k == "freq_y") spec.freq_y = std::stoi(v);
    else throw CLI::ValidationError("unknown warp key '" + k + "'");
  }
  return spec;
}

struct Remap {
  double gamma = 1.0;
  bool invert = false;
};

Remap parse_remap(const std::string& s) {
  Remap r;
  for (const auto& [k, v] : parse_kv(s)) {
    if (k == "gamma") r.gamma = std::stod(v);
    else if (k == "invert") r.invert = std::stoi(v) != 0;
    else throw CLI::ValidationError("unknown remap key '" + k + "'");
  }
  if (r.gamma <= 0.0) throw CLI::ValidationError("remap gamma must be positive");
  return r;
}

SpatialImage apply_remap(const SpatialImage& u, const Remap& r) {
  SpatialImage out(u.nx(), u.ny());
  for (std::size_t p = 0; p < u.size(); ++p) {
    double v = std::pow(std::clamp(u.data()[p], 0.0, 1.0), r.gamma);
    out.data()[p] = r.invert ? 1.0 - v : v;
  }
  return out;
}

// Image source: a file path, "shepplogan:<n>", or
// "gaussian:<n>,<cx>,<cy>,<sigma>,<mass>".
SpatialImage load_source(const std::string& src) {
  const auto colon = src.find(':');
  if (colon != std::string::npos) {
    const std::string kind = src.substr(0, colon);
    const std::string rest = src.substr(colon + 1);
    if (kind == "shepplogan") return shepp_logan(std::stoi(rest));
    if (kind == "gaussian") {
      std::stringstream ss(rest);
      std::string tok;
      std::vector<double> a;
      while (std::getline(ss, tok, ',')) a.push_back(std::stod(tok));
      if (a.size() != 5)
        throw CLI::ValidationError("gaussian:<n>,<cx>,<cy>,<sigma>,<mass>");
      return gaussian_blob(static_cast<int>(a[0]), a[1], a[2], a[3], a[4]);
    }
    if (fs::exists(src)) return read_image(src);
    throw CLI::ValidationError("unknown image source '" + src + "'");
  }
  return read_image(src);
}

double image_sum(const SpatialImage& u) {
  double s = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) s += u.data()[p];
  return s;
}

// Rescale 'img' so its total mass matches 'target_sum' (plain pixel sums;
// the dx*dy factor cancels). The transport prior requires mass parity
// between template and reconstruction.
SpatialImage renormalize_mass(const SpatialImage& img, double target_sum) {
  const double s = image_sum(img);
  if (!(s > 0.0) || !(target_sum > 0.0))
    throw std::runtime_error(
        "template renormalization failed: the transport prior requires a "
        "positive-mass template rescaled to the image mass");
  SpatialImage out = img;
  const double factor = target_sum / s;
  for (std::size_t p = 0; p < out.size(); ++p) out.data()[p] *= factor;
  return out;
}

void write_quality_csv(const std::string& path, const std::string& method,
                       double psnr_db, double ssim_v, double mass_drift,
                       double bb) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.precision(10);
  os << "method,psnr_db,ssim,mass_drift,bb_energy\n"
     << method << ',' << psnr_db << ',' << ssim_v << ',' << mass_drift << ','
     << bb << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_history_file(const std::string& path,
                        const std::vector<IterationRecord>& history) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_history_csv(history, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string stack_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03d", k);
  return std::string(buf);
}

// ---------------------------------------------------------------------------

struct MaskArgs {
  int size = 128;
  int spokes = 0;
  std::string out = "mask.txt";
};

int run_mask(const MaskArgs& a) {
  const SamplingMask mask = make_radial_mask(a.size, a.size, a.spokes);
  StagedOutputs staged;
  write_mask_file(mask, staged.stage(a.out));
  staged.commit();
  std::cout.precision(6);
  std::cout << "mask " << a.size << "x" << a.size << " spokes=" << a.spokes
            << " rate=" << mask.rate << " (" << 100.0 * mask.rate << "%)\n";
  return 0;
}

struct ReconArgs {
  std::string image;
  std::string template_src;
  std::string warp;
  std::string remap;
  std::string mask_file;
  int spokes = 0;
  std::string method = "wtv";
  SolverConfig cfg;
  std::string out = ".";
  std::uint64_t seed = 0;
};

int run_reconstruct(const ReconArgs& a) {
  const SpatialImage truth = load_source(a.image);
  const SpaceTimeGrid grid(truth.nx(), truth.ny(), a.cfg.nt);

  SamplingMask mask;
  if (!a.mask_file.empty()) {
    mask = read_mask_file(a.mask_file);
    if (mask.nx != truth.nx() || mask.ny != truth.ny())
      throw std::runtime_error("mask size does not match the image");
  } else if (a.spokes > 0) {
    mask = make_radial_mask(truth.nx(), truth.ny(), a.spokes);
  } else {
    throw CLI::ValidationError("reconstruct needs --mask or --spokes");
  }

  const KSpaceData f = fourier_forward(truth, mask);  // noise-free data

  const fs::path outdir(a.out);
  fs::create_directories(outdir);
  StagedOutputs staged;

  SpatialImage recon;
  double mass_drift = std::nan("");
  double bb = std::nan("");

  if (a.method == "zerofill") {
    recon = zero_fill_recon(f);
  } else if (a.method == "tv") {
    TvConfig tc;
    tc.alpha_tv = a.cfg.beta;
    tc.max_iters = a.cfg.max_iters;
    tc.rel_tol = a.cfg.rel_tol;
    tc.log_every = a.cfg.log_every;
    const TvResult res = tv_reconstruct(f, tc, grid);
    recon = res.u;
    write_history_file(staged.stage(outdir / "convergence.csv"), res.history);
  } else if (a.method == "wtv") {
    SpatialImage tmpl;
    if (!a.template_src.empty()) {
      tmpl = load_source(a.template_src);
      if (!tmpl.same_shape(truth))
        throw std::runtime_error("template shape does not match the image");
    } else if (!a.warp.empty()) {
      tmpl = warp_template(truth, parse_warp(a.warp, a.seed));
    } else {
      throw CLI::ValidationError("method wtv needs --template or --warp");
    }
    if (!a.remap.empty()) tmpl = apply_remap(tmpl, parse_remap(a.remap));
    for (std::size_t p = 0; p < tmpl.size(); ++p)
      if (!(tmpl.data()[p] >= 0.0))
        throw std::runtime_error("template must be nonnegative");
    tmpl = renormalize_mass(tmpl, image_sum(truth));

    auto [state, diag] = reconstruct(f, tmpl, a.cfg, grid);
    recon = time_slice(state.rho, grid.nt - 1);
    mass_drift = diag.mass_drift;
    bb = diag.bb_energy;

    write_history_file(staged.stage(outdir / "convergence.csv"), state.history);
    write_f64(tmpl, staged.stage(outdir / "template.f64"));
    for (int k = 0; k < grid.nt; ++k)
      write_f64(time_slice(state.rho, k),
                staged.stage(outdir / ("density_" + stack_name(k) + ".f64")));
  } else {
    throw CLI::ValidationError("--method must be zerofill, tv or wtv");
  }

  const double p = psnr(recon, truth);
  const double s = ssim(recon, truth);
  write_pgm16(recon, staged.stage(outdir / "recon.pgm"));
  write_f64(recon, staged.stage(outdir / "recon.f64"));
  write_mask_file(mask, staged.stage(outdir / "mask.txt"));
  write_quality_csv(staged.stage(outdir / "quality.csv"), a.method, p, s,
                    mass_drift, bb);
  staged.commit();

  std::cout.precision(6);
  std::cout << a.method << " psnr_db=" << p << " ssim=" << s;
  if (a.method == "wtv")
    std::cout << " mass_drift=" << mass_drift << " bb_energy=" << bb;
  std::cout << '\n';
  return 0;
}

struct TransportArgs {
  std::string image;
  std::string target;
  SolverConfig cfg;
  std::string out = ".";
};

int run_transport(const TransportArgs& a) {
  const SpatialImage mu = load_source(a.image);
  const SpatialImage nu = load_source(a.target);
  if (!mu.same_shape(nu)) throw std::runtime_error("endpoint shapes differ");
  const SpaceTimeGrid grid(mu.nx(), mu.ny(), a.cfg.nt);

  auto [state, diag] = transport_geodesic(mu, nu, a.cfg, grid);

  const fs::path outdir(a.out);
  fs::create_directories(outdir);
  StagedOutputs staged;
  for (int k = 0; k < grid.nt; ++k)
    write_f64(time_slice(state.rho, k),
              staged.stage(outdir / ("geodesic_" + stack_name(k) + ".f64")));
  write_history_file(staged.stage(outdir / "convergence.csv"), state.history);
  const double w2 = std::isfinite(diag.bb_energy)
                        ? std::sqrt(2.0 * diag.bb_energy)
                        : std::nan("");
  {
    const std::string path = staged.stage(outdir / "transport.csv");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.precision(10);
    os << "bb_energy,w2_estimate,mass_drift\n"
       << diag.bb_energy << ',' << w2 << ',' << diag.mass_drift << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
  }
  staged.commit();

  std::cout.precision(6);
  std::cout << "bb_energy=" << diag.bb_energy << " w2_estimate=" << w2
            << " mass_drift=" << diag.mass_drift << '\n';
  return 0;
}

int run_metrics(const std::string& a, const std::string& b) {
  const SpatialImage u = read_image(a);
  const SpatialImage ref = read_image(b);
  const double p = psnr(u, ref);
  const double s = ssim(u, ref);
  std::cout.precision(10);
  std::cout << p << ',' << s << '\n';
  return 0;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "data fidelity weight");
  cmd->add_option("--beta", cfg.beta, "TV weight");
  cmd->add_option("--tau", cfg.tau, "primal step size");
  cmd->add_option("--sigma", cfg.sigma, "dual step size");
  cmd->add_option("--nt", cfg.nt, "number of time points")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--iters", cfg.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.rel_tol, "relative-change stopping tolerance");
  cmd->add_option("--log-every", cfg.log_every, "convergence-log stride")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads, "worker threads for cell updates")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Undersampled-Fourier image reconstruction with a dynamic "
               "transport prior and total variation"};
  app.require_subcommand(1);

  std::string mask_config, rec_config, tr_config;
  MaskArgs mask_args;
  CLI::App* mask_cmd = app.add_subcommand("mask", "generate a radial sampling mask");
  mask_cmd->add_option("--config", mask_config, "key=value defaults file");
  mask_cmd->add_option("--size", mask_args.size, "grid side length")
      ->check(CLI::Range(4, 1 << 16));
  mask_cmd->add_option("--spokes", mask_args.spokes, "number of radial spokes")
      ->required()
      ->check(CLI::PositiveNumber);
  mask_cmd->add_option("--out", mask_args.out, "output mask file");

  ReconArgs rec_args;
  CLI::App* rec_cmd = app.add_subcommand(
      "reconstruct", "simulate undersampled data and reconstruct");
  rec_cmd->add_option("--config", rec_config, "key=value defaults file");
  rec_cmd->add_option("--image", rec_args.image,
                      "ground truth: file, shepplogan:<n> or gaussian:<...>")
      ->required();
  rec_cmd->add_option("--template", rec_args.template_src, "template image source");
  rec_cmd->add_option("--warp", rec_args.warp,
                      "derive the template by warping the image, e.g. amp=0.05,freq=2");
  rec_cmd->add_option("--remap", rec_args.remap,
                      "intensity remap of the template, e.g. gamma=0.5,invert=1");
  rec_cmd->add_option("--mask", rec_args.mask_file, "sampling mask file");
  rec_cmd->add_option("--spokes", rec_args.spokes, "generate a radial mask instead");
  rec_cmd->add_option("--method", rec_args.method, "zerofill | tv | wtv")
      ->check(CLI::IsMember({"zerofill", "tv", "wtv"}));
  rec_cmd->add_option("--seed", rec_args.seed, "seed for generators");
  rec_cmd->add_option("--out", rec_args.out, "output directory");
  add_solver_flags(rec_cmd, rec_args.cfg);

  TransportArgs tr_args;
  CLI::App* tr_cmd = app.add_subcommand(
      "transport", "pinned-endpoint transport geodesic between two images");
  tr_cmd->add_option("--config", tr_config, "key=value defaults file");
  tr_cmd->add_option("--image", tr_args.image, "start image (slice 0)")->required();
  tr_cmd->add_option("--template", tr_args.target, "target image (last slice)")
      ->required();
  tr_cmd->add_option("--out", tr_args.out, "output directory");
  add_solver_flags(tr_cmd, tr_args.cfg);

  std::string metrics_a, metrics_b;
  CLI::App* met_cmd =
      app.add_subcommand("metrics", "print psnr_db,ssim for two images");
  met_cmd->add_option("restored", metrics_a, "restored image")->required();
  met_cmd->add_option("reference", metrics_b, "reference image")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mask_cmd) {
      if (!mask_config.empty()) apply_config_file(mask_cmd, mask_config);
      return run_mask(mask_args);
    }
    if (*rec_cmd) {
      if (!rec_config.empty()) apply_config_file(rec_cmd, rec_config);
      return run_reconstruct(rec_args);
    }
    if (*tr_cmd) {
      if (!tr_config.empty()) apply_config_file(tr_cmd, tr_config);
      return run_transport(tr_args);
    }
    if (*met_cmd) return run_metrics(metrics_a, metrics_b);
  } catch (const std::exception& e) {
    std::cerr << "wasstv: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
