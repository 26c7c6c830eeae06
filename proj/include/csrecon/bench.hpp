#pragma once

// Benchmark harness: plan files, image ingestion (files or phantom:WxH
// pseudo-paths), per-(image, solver) execution with shared-nothing tasks,
// and CSV / aligned-table emission. Rows always appear in plan order no
// matter how tasks are scheduled.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "csrecon/errors.hpp"
#include "csrecon/fourier.hpp"
#include "csrecon/grid.hpp"
#include "csrecon/io.hpp"
#include "csrecon/io_png.hpp"
#include "csrecon/metrics.hpp"
#include "csrecon/phantom.hpp"
#include "csrecon/sampling.hpp"
#include "csrecon/solvers.hpp"

namespace csrecon {

enum class SolverKind { twist, recpf, salsa };

inline const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::twist: return "twist";
    case SolverKind::recpf: return "recpf";
    case SolverKind::salsa: return "salsa";
  }
  return "?";
}

/// Load an input image: .pgm / .png files, or the synthetic phantom via the
/// pseudo-path "phantom:WxH" (quantized to 8 bits exactly like file input).
inline Image load_input_image(const std::string& path) {
  if (path.rfind("phantom:", 0) == 0) {
    const std::string dims = path.substr(8);
    const auto x = dims.find('x');
    if (x == std::string::npos) {
      throw FormatError(path + ": phantom pseudo-path must look like phantom:128x128");
    }
    int w = 0;
    int h = 0;
    try {
      w = std::stoi(dims.substr(0, x));
      h = std::stoi(dims.substr(x + 1));
    } catch (const std::exception&) {
      throw FormatError(path + ": bad phantom dimensions");
    }
    if (w <= 0 || h <= 0) throw FormatError(path + ": bad phantom dimensions");
    return image_from_bytes(w, h, bytes_from_image(ellipse_phantom(w, h)));
  }
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) {
    return read_png_gray8(path);
  }
  return read_pgm(path);
}

inline void write_output_image(const std::string& path, const Image& img) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) {
    write_png_gray8(path, img);
    return;
  }
  write_pgm(path, img);
}

struct BenchPlan {
  std::vector<std::string> images;
  MaskSpec mask;  // width/height filled in per image
  std::vector<SolverKind> solvers;
  double tv_weight = 1e-2;
  SolverConfig twist_cfg;
  SolverConfig recpf_cfg;
  SolverConfig salsa_cfg;
  std::string output_dir = "bench_out";
  bool emit_images = false;

  const SolverConfig& config_for(SolverKind k) const {
    switch (k) {
      case SolverKind::twist: return twist_cfg;
      case SolverKind::recpf: return recpf_cfg;
      case SolverKind::salsa: return salsa_cfg;
    }
    throw std::invalid_argument("unknown solver kind");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("plan: bad numeric value '" + v + "' for " + key);
  }
}

inline int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw FormatError("plan: bad integer value '" + v + "' for " + key);
  }
}

inline void apply_solver_override(SolverConfig& cfg, SolverKind kind,
                                  const std::string& param, const std::string& value,
                                  const std::string& key) {
  if (param == "lambda") {
    cfg.lambda = parse_double(value, key);
  } else if (param == "max_iter") {
    cfg.max_iter = parse_int(value, key);
  } else if (param == "tol") {
    cfg.tol = parse_double(value, key);
  } else if (param == "inner_prox_iters") {
    cfg.inner_prox_iters = parse_int(value, key);
  } else if (param == "alpha" && kind == SolverKind::twist) {
    cfg.twist_alpha = parse_double(value, key);
  } else if (param == "beta" && kind == SolverKind::twist) {
    cfg.twist_beta = parse_double(value, key);
  } else if (param == "beta" && kind == SolverKind::recpf) {
    cfg.recpf_beta = parse_double(value, key);
  } else if (param == "mu" && kind == SolverKind::salsa) {
    cfg.salsa_mu = parse_double(value, key);
  } else {
    throw FormatError("plan: unknown solver parameter '" + key + "'");
  }
}

}  // namespace detail

/// Parse the flat key=value plan format. Repeatable keys: image=, solver=.
/// Per-solver overrides: solver.<name>.<param>=. Lines starting with '#'
/// and blank lines are ignored.
inline BenchPlan parse_plan(std::istream& in) {
  BenchPlan plan;
  std::map<SolverKind, std::map<std::string, std::string>> overrides;
  double tv_weight = 1e-2;
  bool tv_weight_set = false;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("plan: line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));

    if (key == "image") {
      plan.images.push_back(value);
    } else if (key == "solver") {
      if (value == "twist") {
        plan.solvers.push_back(SolverKind::twist);
      } else if (value == "recpf") {
        plan.solvers.push_back(SolverKind::recpf);
      } else if (value == "salsa") {
        plan.solvers.push_back(SolverKind::salsa);
      } else {
        throw FormatError("plan: unknown solver '" + value + "'");
      }
    } else if (key == "tv_weight") {
      tv_weight = detail::parse_double(value, key);
      tv_weight_set = true;
    } else if (key == "mask.kind") {
      if (value == "radial") {
        plan.mask.kind = MaskKind::radial;
      } else if (value == "variable-density") {
        plan.mask.kind = MaskKind::variable_density;
      } else if (value == "full") {
        plan.mask.kind = MaskKind::full;
      } else {
        throw FormatError("plan: unknown mask kind '" + value + "'");
      }
    } else if (key == "mask.fraction") {
      plan.mask.target_fraction = detail::parse_double(value, key);
    } else if (key == "mask.tol") {
      plan.mask.tol = detail::parse_double(value, key);
    } else if (key == "mask.lines") {
      plan.mask.num_lines = detail::parse_int(value, key);
    } else if (key == "mask.decay") {
      plan.mask.decay = detail::parse_double(value, key);
    } else if (key == "mask.seed") {
      plan.mask.seed = static_cast<std::uint64_t>(
          std::stoull(value));
    } else if (key == "output_dir") {
      plan.output_dir = value;
    } else if (key == "emit_images") {
      if (value == "true" || value == "1") {
        plan.emit_images = true;
      } else if (value == "false" || value == "0") {
        plan.emit_images = false;
      } else {
        throw FormatError("plan: emit_images must be true or false");
      }
    } else if (key.rfind("solver.", 0) == 0) {
      const auto rest = key.substr(7);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) throw FormatError("plan: bad key '" + key + "'");
      const std::string name = rest.substr(0, dot);
      const std::string param = rest.substr(dot + 1);
      SolverKind kind;
      if (name == "twist") {
        kind = SolverKind::twist;
      } else if (name == "recpf") {
        kind = SolverKind::recpf;
      } else if (name == "salsa") {
        kind = SolverKind::salsa;
      } else {
        throw FormatError("plan: unknown solver '" + name + "' in key '" + key + "'");
      }
      overrides[kind][param] = value;
    } else {
      throw FormatError("plan: unknown key '" + key + "'");
    }
  }

  if (plan.images.empty()) throw FormatError("plan: at least one image= line is required");
  if (plan.solvers.empty()) throw FormatError("plan: at least one solver= line is required");
  {
    std::vector<SolverKind> seen;
    for (SolverKind k : plan.solvers) {
      if (std::find(seen.begin(), seen.end(), k) != seen.end()) {
        throw FormatError(std::string("plan: solver '") + solver_name(k) + "' listed twice");
      }
      seen.push_back(k);
    }
  }
  if (!(plan.mask.target_fraction > 0.0 && plan.mask.target_fraction <= 1.0)) {
    throw FormatError("plan: mask.fraction must be in (0,1]");
  }

  plan.tv_weight = tv_weight;
  (void)tv_weight_set;
  plan.twist_cfg.lambda = tv_weight;
  plan.salsa_cfg.lambda = tv_weight;
  plan.recpf_cfg.lambda = 1.0 / tv_weight;
  for (const auto& [kind, params] : overrides) {
    SolverConfig& cfg = kind == SolverKind::twist   ? plan.twist_cfg
                        : kind == SolverKind::recpf ? plan.recpf_cfg
                                                    : plan.salsa_cfg;
    for (const auto& [param, value] : params) {
      detail::apply_solver_override(cfg, kind, param, value,
                                    "solver." + std::string(solver_name(kind)) + "." + param);
    }
  }
  return plan;
}

inline BenchPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open plan file " + path);
  return parse_plan(in);
}

struct BenchRecord {
  std::string image_name;
  std::string solver_name;
  double mask_fraction = std::numeric_limits<double>::quiet_NaN();
  double relative_error_pct = std::numeric_limits<double>::quiet_NaN();
  double psnr_db = std::numeric_limits<double>::quiet_NaN();
  double cpu_seconds = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  long long fft_count = 0;
  bool failed = false;
  int failure_severity = 0;  // 2 data, 3 numerical
  std::string error;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<std::string> comparison_notes;
  bool any_failed = false;
  int max_severity = 0;
};

/// CSV columns, fixed order. Failed records leave the numeric fields empty.
inline std::string render_csv(const std::vector<BenchRecord>& records) {
  std::string out =
      "image,solver,mask_fraction,rel_error_pct,psnr_db,cpu_seconds,iterations,fft_count\n";
  for (const auto& r : records) {
    out += r.image_name + "," + r.solver_name + ",";
    if (r.failed) {
      out += ",,,,,\n";
      continue;
    }
    out += format_sig6(r.mask_fraction) + "," + format_sig6(r.relative_error_pct) +
           "," + format_sig6(r.psnr_db) + "," + format_sig6(r.cpu_seconds) + "," +
           std::to_string(r.iterations) + "," + std::to_string(r.fft_count) + "\n";
  }
  return out;
}

inline std::string render_table(const std::vector<BenchRecord>& records) {
  const std::vector<std::string> headers = {"image",   "solver",      "fraction",
                                            "rel.err%", "psnr(dB)",   "cpu(s)",
                                            "iters",   "ffts"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : records) {
    if (r.failed) {
      rows.push_back({r.image_name, r.solver_name, "FAILED", r.error, "", "", "", ""});
      continue;
    }
    rows.push_back({r.image_name, r.solver_name, format_sig6(r.mask_fraction),
                    format_sig6(r.relative_error_pct), format_sig6(r.psnr_db),
                    format_sig6(r.cpu_seconds), std::to_string(r.iterations),
                    std::to_string(r.fft_count)});
  }
  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) out += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += "\n";
  };
  emit_row(headers);
  for (const auto& row : rows) emit_row(row);
  return out;
}

inline std::string describe_config(const SolverConfig& c, SolverKind k) {
  std::string s = "lambda=" + format_sig6(c.lambda) +
                  " max_iter=" + std::to_string(c.max_iter) +
                  " tol=" + format_sig6(c.tol) +
                  " inner_prox_iters=" + std::to_string(c.inner_prox_iters);
  if (k == SolverKind::twist) {
    s += " alpha=" + (c.twist_alpha ? format_sig6(*c.twist_alpha) : std::string("auto"));
    s += " beta=" + (c.twist_beta ? format_sig6(*c.twist_beta) : std::string("auto"));
  }
  if (k == SolverKind::recpf) s += " beta=" + format_sig6(c.recpf_beta);
  if (k == SolverKind::salsa) s += " mu=" + format_sig6(c.salsa_mu);
  return s;
}

inline std::string describe_mask(const MaskSpec& m) {
  std::string s;
  switch (m.kind) {
    case MaskKind::radial:
      s = "kind=radial";
      if (m.num_lines > 0) {
        s += " lines=" + std::to_string(m.num_lines);
      } else {
        s += " fraction=" + format_sig6(m.target_fraction) + " tol=" + format_sig6(m.tol);
      }
      break;
    case MaskKind::variable_density:
      s = "kind=variable-density fraction=" + format_sig6(m.target_fraction) +
          " decay=" + format_sig6(m.decay) + " seed=" + std::to_string(m.seed);
      break;
    case MaskKind::full:
      s = "kind=full";
      break;
  }
  return s;
}

/// Run the plan: for every (image, solver) pair, mask -> measure ->
/// reconstruct -> metrics. Tasks execute concurrently; failures mark their
/// record and the run continues.
inline BenchResult run_bench(const BenchPlan& plan) {
  struct Task {
    std::size_t image_idx;
    std::size_t solver_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < plan.images.size(); ++i) {
    for (std::size_t s = 0; s < plan.solvers.size(); ++s) {
      tasks.push_back({i, s});
    }
  }

  BenchResult result;
  result.records.resize(tasks.size());
  std::vector<Image> outputs(tasks.size(), Image(1, 1));

  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    BenchRecord& rec = result.records[t];
    rec.image_name = plan.images[task.image_idx];
    const SolverKind kind = plan.solvers[task.solver_idx];
    rec.solver_name = solver_name(kind);
    try {
      const Image truth = load_input_image(rec.image_name);
      MaskSpec spec = plan.mask;
      spec.width = truth.width();
      spec.height = truth.height();
      const MaskBuildResult mask = build_mask(spec);
      rec.mask_fraction = mask.achieved_fraction;
      PartialFourierOp op(mask.mask);
      const Measurements y = op.apply(truth);

      std::pair<Image, SolverReport> out = [&] {
        switch (kind) {
          case SolverKind::twist: return reconstruct_twist(y, op, plan.twist_cfg);
          case SolverKind::recpf: return reconstruct_recpf(y, op, plan.recpf_cfg);
          case SolverKind::salsa: return reconstruct_salsa(y, op, plan.salsa_cfg);
        }
        throw std::invalid_argument("unknown solver kind");
      }();

      const SolverReport& rep = out.second;
      rec.cpu_seconds = rep.wall_time_seconds;
      rec.iterations = rep.iterations;
      rec.fft_count = rep.fft_count;
      rec.relative_error_pct = relative_error(truth, out.first);
      rec.psnr_db = psnr(truth, out.first);
      outputs[t] = std::move(out.first);
    } catch (const NumericalError& e) {
      rec.failed = true;
      rec.failure_severity = 3;
      rec.error = e.what();
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure_severity = 2;
      rec.error = e.what();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, tasks.size());
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
          run_task(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& r : result.records) {
    if (r.failed) {
      result.any_failed = true;
      result.max_severity = std::max(result.max_severity, r.failure_severity);
    }
  }

  if (plan.emit_images) {
    std::filesystem::create_directories(plan.output_dir);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (result.records[t].failed) continue;
      std::string stem = result.records[t].image_name;
      for (char& ch : stem) {
        if (ch == '/' || ch == '\\' || ch == ':') ch = '_';
      }
      const auto dot = stem.rfind('.');
      if (dot != std::string::npos) stem = stem.substr(0, dot);
      write_pgm(plan.output_dir + "/" + stem + "_" + result.records[t].solver_name + ".pgm",
                outputs[t]);
    }
  }

  // Qualitative ordering note per image: does SALSA post the best PSNR and
  // RecPF the best wall time? Reported, never asserted.
  for (std::size_t i = 0; i < plan.images.size(); ++i) {
    std::vector<const BenchRecord*> group;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].image_idx == i && !result.records[t].failed) {
        group.push_back(&result.records[t]);
      }
    }
    if (group.size() < 2) continue;
    const auto* best_psnr = group.front();
    const auto* best_cpu = group.front();
    for (const auto* r : group) {
      if (r->psnr_db > best_psnr->psnr_db) best_psnr = r;
      if (r->cpu_seconds < best_cpu->cpu_seconds) best_cpu = r;
    }
    std::string note = "note[" + plan.images[i] + "]: highest psnr = " +
                       best_psnr->solver_name +
                       (best_psnr->solver_name == "salsa" ? " (matches reported ordering)"
                                                          : " (differs from reported ordering)") +
                       "; fastest = " + best_cpu->solver_name +
                       (best_cpu->solver_name == "recpf" ? " (matches reported ordering)"
                                                         : " (differs from reported ordering)");
    result.comparison_notes.push_back(note);
  }
  return result;
}

}  // namespace csrecon
