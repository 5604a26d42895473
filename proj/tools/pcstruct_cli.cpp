// pcstruct: phase-congruency structure toolkit CLI.
//
// Exit codes: 0 success, 1 usage/argument error, 2 I/O error, 3 numeric error.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcstruct/config_io.hpp"
#include "pcstruct/depth_geometry.hpp"
#include "pcstruct/depth_io.hpp"
#include "pcstruct/edge_operators.hpp"
#include "pcstruct/image.hpp"
#include "pcstruct/loss_schedule.hpp"
#include "pcstruct/metrics.hpp"
#include "pcstruct/phase_congruency.hpp"
#include "pcstruct/pnm.hpp"
#include "pcstruct/spectral.hpp"
#include "pcstruct/struct_loss.hpp"

namespace fs = std::filesystem;
using namespace pcstruct;

namespace {

// Round-trippable real formatting, locale-independent.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct BankOptions {
  FilterBankConfig config;
  double epsilon = 1e-4;
  std::string config_path;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--scales", config.n_scales, "log-Gabor scales");
    cmd->add_option("--orients", config.n_orientations, "log-Gabor orientations");
    cmd->add_option("--min-wavelength", config.min_wavelength, "smallest-scale wavelength (px)");
    cmd->add_option("--mult", config.scale_multiplier, "wavelength multiplier between scales");
    cmd->add_option("--sigma-on-f", config.sigma_on_f, "radial bandwidth ratio");
    cmd->add_option("--d-theta-sigma", config.d_theta_sigma, "angular spread ratio");
    cmd->add_option("--epsilon", epsilon, "PC stabilizer");
  }

  // --config supplies base values; explicit flags already overwrote defaults,
  // so file values fill only keys the user did not pass.
  void resolve(const CLI::App* cmd) {
    if (!config_path.empty()) {
      const KeyValueMap kv = load_key_values(config_path);
      const FilterBankConfig file_cfg = filter_bank_config_from(kv);
      if (cmd->count("--scales") == 0) config.n_scales = file_cfg.n_scales;
      if (cmd->count("--orients") == 0) config.n_orientations = file_cfg.n_orientations;
      if (cmd->count("--min-wavelength") == 0) config.min_wavelength = file_cfg.min_wavelength;
      if (cmd->count("--mult") == 0) config.scale_multiplier = file_cfg.scale_multiplier;
      if (cmd->count("--sigma-on-f") == 0) config.sigma_on_f = file_cfg.sigma_on_f;
      if (cmd->count("--d-theta-sigma") == 0) config.d_theta_sigma = file_cfg.d_theta_sigma;
    }
    config.validate();
  }

  void echo(std::ostream& out) const {
    write_filter_bank_config(out, config);
    out << "epsilon=" << fmt(epsilon) << "\n";
  }
};

void write_sidecar(const std::string& out_dir, const std::string& command,
                   const std::function<void(std::ostream&)>& body) {
  std::ofstream out(fs::path(out_dir) / "run_config.txt");
  if (!out) throw std::runtime_error(out_dir + ": cannot write run_config.txt");
  out << "command=" << command << "\n";
  body(out);
}

GrayImage scale_to_codes(const std::vector<double>& grid, int width, int height,
                         double maxval, double scale) {
  GrayImage img(width, height, maxval);
  for (std::size_t i = 0; i < grid.size(); ++i) img.data[i] = grid[i] * scale;
  return img;
}

double grid_max(const std::vector<double>& grid) {
  double m = 0.0;
  for (double v : grid) m = std::max(m, v);
  return m;
}

int cmd_pc_map(const std::string& image_path, const std::string& out_dir,
               const BankOptions& bank_opts, bool noise_comp, bool dump_energies) {
  const GrayImage img = read_pnm_gray(image_path);
  const FilterBank bank = build_bank(bank_opts.config, img.width, img.height);
  const PCResult result = noise_comp
      ? compute_pc_noise_compensated(img, bank, bank_opts.epsilon)
      : compute_pc(img, bank, bank_opts.epsilon);

  fs::create_directories(out_dir);
  const double scale = 65535.0;  // pc is already in [0,1]
  write_pnm(scale_to_codes(result.pc, img.width, img.height, 65535.0, scale),
            (fs::path(out_dir) / "pc_map.pgm").string());
  if (dump_energies) {
    for (std::size_t o = 0; o < result.orientation_energy.size(); ++o) {
      const auto& grid = result.orientation_energy[o];
      const double emax = grid_max(grid);
      const double escale = emax > 0.0 ? 65535.0 / emax : 0.0;
      write_pnm(scale_to_codes(grid, img.width, img.height, 65535.0, escale),
                (fs::path(out_dir) / ("energy_o" + std::to_string(o) + ".pgm")).string());
    }
  }

  double sum = 0.0, pmax = 0.0;
  for (double v : result.pc) {
    sum += v;
    pmax = std::max(pmax, v);
  }
  std::ofstream csv(fs::path(out_dir) / "pc_stats.csv");
  csv << "scale_factor,pc_mean,pc_max\n"
      << fmt(scale) << "," << fmt(sum / static_cast<double>(result.pc.size()))
      << "," << fmt(pmax) << "\n";
  std::cerr << "pc_map scale_factor=" << fmt(scale) << "\n";

  write_sidecar(out_dir, "pc-map", [&](std::ostream& out) {
    out << "input=" << image_path << "\n";
    bank_opts.echo(out);
    out << "noise_comp=" << (noise_comp ? 1 : 0) << "\n"
        << "energies=" << (dump_energies ? 1 : 0) << "\n";
  });
  return 0;
}

int cmd_edge_compare(const std::string& image_path, const std::string& out_dir,
                     const BankOptions& bank_opts, const EdgeParams& edge_params) {
  const PnmImage raw = read_pnm(image_path);
  const GrayImage y = std::holds_alternative<GrayImage>(raw)
                          ? std::get<GrayImage>(raw)
                          : to_luminance(std::get<ColorImage>(raw));
  fs::create_directories(out_dir);

  const GrayImage y8 = normalize(y, 255.0);
  write_pnm(y8, (fs::path(out_dir) / "y_channel.pgm").string());

  const FilterBank bank = build_bank(bank_opts.config, y.width, y.height);
  const PCResult pc = compute_pc(y, bank, bank_opts.epsilon);
  write_pnm(scale_to_codes(pc.pc, y.width, y.height, 255.0, 255.0),
            (fs::path(out_dir) / "pc_map.pgm").string());

  for (EdgeOperator op : {EdgeOperator::roberts, EdgeOperator::prewitt,
                          EdgeOperator::sobel, EdgeOperator::canny,
                          EdgeOperator::laplacian}) {
    const EdgeMap edges = edge_detect(y8, op, edge_params);
    double scale = 255.0;
    if (!edges.binary) {
      const double emax = grid_max(edges.values);
      scale = emax > 0.0 ? 255.0 / emax : 0.0;
    }
    write_pnm(scale_to_codes(edges.values, y.width, y.height, 255.0, scale),
              (fs::path(out_dir) / (edge_operator_name(op) + ".pgm")).string());
  }

  write_sidecar(out_dir, "edge-compare", [&](std::ostream& out) {
    out << "input=" << image_path << "\n";
    bank_opts.echo(out);
    out << "canny_sigma=" << fmt(edge_params.canny_sigma) << "\n"
        << "canny_low=" << fmt(edge_params.canny_low) << "\n"
        << "canny_high=" << fmt(edge_params.canny_high) << "\n";
  });
  return 0;
}

int cmd_pc_loss(const std::string& gen_path, const std::string& real_path,
                const BankOptions& bank_opts, double t1, double t2) {
  const GrayImage gen = read_pnm_gray(gen_path);
  const GrayImage real = read_pnm_gray(real_path);
  const FilterBank bank = build_bank(bank_opts.config, gen.width, gen.height);
  const PcLossBreakdown b =
      pc_loss_breakdown(gen, real, bank, bank_opts.epsilon, t1, t2);
  std::cout << "l_pc,fsim,check,mean_s_pc,mean_s_g\n"
            << fmt(b.loss) << "," << fmt(b.fsim) << "," << fmt(b.loss + b.fsim)
            << "," << fmt(b.mean_s_pc) << "," << fmt(b.mean_s_g) << "\n";
  return 0;
}

int cmd_normal_loss(const std::string& sim_path, const std::string& rec_path,
                    double step_scale, const std::string& grad_out) {
  const DepthMap sim = read_depth_any(sim_path);
  const DepthMap rec = read_depth_any(rec_path);
  const double loss = normal_loss(sim, rec, step_scale);
  std::cout << "l_n\n" << fmt(loss) << "\n";
  if (!grad_out.empty()) {
    const std::vector<double> grad = normal_loss_gradient(sim, rec, step_scale);
    DepthMap g(rec.width, rec.height, DepthEncoding::metric_mm);
    g.data = grad;
    write_depth_raw(g, grad_out);
  }
  return 0;
}

int cmd_depth_invert(const std::string& in_path, const std::string& out_path,
                     const std::string& direction) {
  const DepthMap in = read_depth_any(in_path);
  if (direction == "to-inverse") {
    write_depth_raw(invert_depth(in), out_path);
  } else if (direction == "to-positive") {
    const DepthMap out = revert_depth(in);
    const auto dot = out_path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : out_path.substr(dot);
    if (ext == ".pgm" || ext == ".pnm")
      write_depth_pgm16(out, out_path);
    else
      write_depth_raw(out, out_path);
  } else {
    throw CLI::ValidationError("--direction must be to-inverse or to-positive");
  }
  return 0;
}

int cmd_profile(const std::string& depth_path, int row,
                const std::string& line_spec) {
  const DepthMap d = read_depth_any(depth_path);
  std::vector<double> profile;
  if (!line_spec.empty()) {
    int x0, y0, x1, y1;
    if (std::sscanf(line_spec.c_str(), "%d,%d,%d,%d", &x0, &y0, &x1, &y1) != 4)
      throw std::invalid_argument("--line expects x0,y0,x1,y1");
    profile = extract_profile(d, x0, y0, x1, y1);
  } else {
    profile = extract_profile(d, row);
  }
  std::cout << "index,depth\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    std::cout << i << "," << fmt(profile[i]) << "\n";
  const QuantizationStats q = quantization_stats(d);
  std::cout << "distinct_levels,mean_plateau_run,max_step\n"
            << q.distinct_levels << "," << fmt(q.mean_plateau_run) << ","
            << fmt(q.max_step) << "\n";
  return 0;
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open manifest");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string pred, gt;
    if (!(tokens >> pred >> gt))
      throw std::runtime_error(path + ": manifest line needs two paths");
    pairs.emplace_back(pred, gt);
  }
  if (pairs.empty()) throw std::runtime_error(path + ": empty manifest");
  return pairs;
}

int cmd_metrics(const std::string& manifest_path, const std::string& kind,
                bool align_scale) {
  const auto pairs = read_manifest(manifest_path);
  if (kind == "depth") {
    std::cout << "pred,gt,rmse,mae,sq_rel,n_valid\n";
    double sum_rmse = 0.0, sum_mae = 0.0, sum_rel = 0.0;
    for (const auto& [pred_path, gt_path] : pairs) {
      DepthMap pred = read_depth_any(pred_path);
      const DepthMap gt = read_depth_any(gt_path);
      std::vector<bool> mask(gt.size());
      for (std::size_t i = 0; i < gt.size(); ++i) mask[i] = gt.data[i] > 0.0;
      if (align_scale) {
        const double s = scale_alignment(pred, gt, mask);
        for (double& v : pred.data) v *= s;
      }
      const DepthMetrics m = depth_metrics(pred, gt, mask);
      std::cout << pred_path << "," << gt_path << "," << fmt(m.rmse) << ","
                << fmt(m.mae) << "," << fmt(m.sq_rel) << "," << m.n_valid << "\n";
      sum_rmse += m.rmse;
      sum_mae += m.mae;
      sum_rel += m.sq_rel;
    }
    const double n = static_cast<double>(pairs.size());
    std::cout << "summary,," << fmt(sum_rmse / n) << "," << fmt(sum_mae / n)
              << "," << fmt(sum_rel / n) << "," << pairs.size() << "\n";
  } else if (kind == "image") {
    std::cout << "a,b,psnr,ssim\n";
    double sum_psnr = 0.0, sum_ssim = 0.0;
    for (const auto& [a_path, b_path] : pairs) {
      const GrayImage a = read_pnm_gray(a_path);
      const GrayImage b = read_pnm_gray(b_path);
      const double p = psnr(a, b);
      const double s = ssim(a, b);
      std::cout << a_path << "," << b_path << ","
                << (std::isinf(p) ? std::string("inf") : fmt(p)) << "," << fmt(s)
                << "\n";
      sum_psnr += p;
      sum_ssim += s;
    }
    const double n = static_cast<double>(pairs.size());
    std::cout << "summary,,"
              << (std::isinf(sum_psnr) ? std::string("inf") : fmt(sum_psnr / n))
              << "," << fmt(sum_ssim / n) << "\n";
  } else {
    throw CLI::ValidationError("--kind must be depth or image");
  }
  return 0;
}

LossComponents components_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open components file");
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    throw std::runtime_error(path + ": expected CSV header and one row");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
  };
  const auto keys = split(header);
  const auto vals = split(row);
  if (keys.size() != vals.size())
    throw std::runtime_error(path + ": header/row column count mismatch");
  LossComponents c;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double v = std::stod(vals[i]);
    if (keys[i] == "gan") c.gan = v;
    else if (keys[i] == "cyc") c.cyc = v;
    else if (keys[i] == "excyc") c.excyc = v;
    else if (keys[i] == "dir") c.dir = v;
    else if (keys[i] == "iden_d") c.iden_d = v;
    else if (keys[i] == "pc") c.pc = v;
    else if (keys[i] == "normal") c.normal = v;
    else throw std::runtime_error(path + ": unknown component '" + keys[i] + "'");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-congruency structure toolkit"};
  app.require_subcommand(1);

  // pc-map
  auto* pc_map = app.add_subcommand("pc-map", "Phase congruency map of an image");
  std::string pm_image, pm_out = "out";
  BankOptions pm_bank;
  bool pm_noise = false, pm_energies = false;
  pc_map->add_option("image", pm_image, "input PNM")->required();
  pc_map->add_option("--out", pm_out, "output directory");
  pm_bank.add_flags(pc_map);
  pc_map->add_flag("--noise-comp", pm_noise, "subtract an estimated noise floor");
  pc_map->add_flag("--energies", pm_energies, "also write per-orientation energy maps");

  // edge-compare
  auto* edge_cmp = app.add_subcommand("edge-compare",
                                      "Y-channel, PC map, and five edge operators");
  std::string ec_image, ec_out = "out";
  BankOptions ec_bank;
  EdgeParams ec_params;
  edge_cmp->add_option("image", ec_image, "input PNM")->required();
  edge_cmp->add_option("--out", ec_out, "output directory");
  ec_bank.add_flags(edge_cmp);
  edge_cmp->add_option("--canny-sigma", ec_params.canny_sigma, "Canny Gaussian sigma");
  edge_cmp->add_option("--canny-low", ec_params.canny_low, "low threshold fraction");
  edge_cmp->add_option("--canny-high", ec_params.canny_high, "high threshold fraction");

  // pc-loss
  auto* pc_loss_cmd = app.add_subcommand("pc-loss", "Phase congruency loss of an image pair");
  std::string pl_gen, pl_real;
  BankOptions pl_bank;
  double pl_t1 = 0.85, pl_t2 = 160.0;
  pc_loss_cmd->add_option("gen", pl_gen, "generated image")->required();
  pc_loss_cmd->add_option("real", pl_real, "reference image")->required();
  pl_bank.add_flags(pc_loss_cmd);
  pc_loss_cmd->add_option("--t1", pl_t1, "S_PC stabilizer");
  pc_loss_cmd->add_option("--t2", pl_t2, "S_G stabilizer");

  // normal-loss
  auto* normal_cmd = app.add_subcommand("normal-loss", "Normal-consistency loss of two depth maps");
  std::string nl_sim, nl_rec, nl_grad_out;
  double nl_step = 1.0;
  normal_cmd->add_option("sim", nl_sim, "reference depth map")->required();
  normal_cmd->add_option("rec", nl_rec, "reconstructed depth map")->required();
  normal_cmd->add_option("--step-scale", nl_step, "depth units per pixel");
  normal_cmd->add_option("--grad-out", nl_grad_out, "write dL/d(rec) as raw depth");

  // depth-invert
  auto* invert_cmd = app.add_subcommand("depth-invert", "Convert between positive and inverse depth");
  std::string di_in, di_out, di_direction = "to-inverse";
  invert_cmd->add_option("input", di_in, "input depth")->required();
  invert_cmd->add_option("output", di_out, "output depth")->required();
  invert_cmd->add_option("--direction", di_direction, "to-inverse | to-positive");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Depth profile along a row or segment");
  std::string pr_depth, pr_line;
  int pr_row = 0;
  profile_cmd->add_option("depth", pr_depth, "input depth")->required();
  profile_cmd->add_option("--row", pr_row, "row index");
  profile_cmd->add_option("--line", pr_line, "segment x0,y0,x1,y1");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Batch PSNR/SSIM or RMSE/MAE/SqRel");
  std::string mt_manifest, mt_kind = "image";
  bool mt_align = false;
  metrics_cmd->add_option("manifest", mt_manifest, "text file of pred gt path pairs")->required();
  metrics_cmd->add_option("--kind", mt_kind, "depth | image");
  metrics_cmd->add_flag("--align-scale", mt_align, "least-squares scale alignment (depth)");

  // total-loss
  auto* total_cmd = app.add_subcommand("total-loss", "Weighted total training loss");
  std::string tl_components, tl_weights_path;
  int tl_epoch = 0;
  LossWeights tl_weights;
  total_cmd->add_option("components", tl_components, "CSV of component values")->required();
  total_cmd->add_option("--weights-config", tl_weights_path, "key=value weights file");
  total_cmd->add_option("--epoch", tl_epoch, "training epoch")->required();
  total_cmd->add_option("--alpha", tl_weights.alpha, "GAN weight");
  total_cmd->add_option("--beta", tl_weights.beta, "cycle weight");
  total_cmd->add_option("--gamma", tl_weights.gamma, "identity/PC weight");
  total_cmd->add_option("--lambda", tl_weights.lambda, "normal-loss weight");
  total_cmd->add_option("--pc-start-epoch", tl_weights.pc_start_epoch, "epoch gating the PC term");

  try {
    app.parse(argc, argv);

    if (*pc_map) {
      pm_bank.resolve(pc_map);
      return cmd_pc_map(pm_image, pm_out, pm_bank, pm_noise, pm_energies);
    }
    if (*edge_cmp) {
      ec_bank.resolve(edge_cmp);
      return cmd_edge_compare(ec_image, ec_out, ec_bank, ec_params);
    }
    if (*pc_loss_cmd) {
      pl_bank.resolve(pc_loss_cmd);
      return cmd_pc_loss(pl_gen, pl_real, pl_bank, pl_t1, pl_t2);
    }
    if (*normal_cmd) return cmd_normal_loss(nl_sim, nl_rec, nl_step, nl_grad_out);
    if (*invert_cmd) return cmd_depth_invert(di_in, di_out, di_direction);
    if (*profile_cmd) return cmd_profile(pr_depth, pr_row, pr_line);
    if (*metrics_cmd) return cmd_metrics(mt_manifest, mt_kind, mt_align);
    if (*total_cmd) {
      if (!tl_weights_path.empty()) {
        const KeyValueMap kv = load_key_values(tl_weights_path);
        const LossWeights file_w = loss_weights_from(kv);
        if (total_cmd->count("--alpha") == 0) tl_weights.alpha = file_w.alpha;
        if (total_cmd->count("--beta") == 0) tl_weights.beta = file_w.beta;
        if (total_cmd->count("--gamma") == 0) tl_weights.gamma = file_w.gamma;
        if (total_cmd->count("--lambda") == 0) tl_weights.lambda = file_w.lambda;
        if (total_cmd->count("--pc-start-epoch") == 0)
          tl_weights.pc_start_epoch = file_w.pc_start_epoch;
      }
      const LossComponents c = components_from_csv(tl_components);
      std::cout << "total_loss\n" << fmt(total_loss(c, tl_weights, tl_epoch)) << "\n";
      return 0;
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/error text
    return code == 0 ? 0 : 1;     // usage errors are always exit 1
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  }
}
