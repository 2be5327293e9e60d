// Command-line front end: fixed points, point classification, orbits,
// scalar sequences, lemma certificates, and image sweeps for the planar map
// f(x,y) = (xy + c, x).  Every subcommand is a thin adapter over the
// library; config-file values fill in flags the user did not pass.
//
// Exit codes: 0 success, 1 domain error, 2 usage error, 3 certification
// incomplete (certify only).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibjulia/certifier.hpp"
#include "fibjulia/classifier.hpp"
#include "fibjulia/config.hpp"
#include "fibjulia/core.hpp"
#include "fibjulia/jsonio.hpp"
#include "fibjulia/regions.hpp"
#include "fibjulia/render.hpp"

namespace {

using namespace fibjulia;

double parse_field(const std::string& flag, const std::string& text) {
  double out = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto r = std::from_chars(begin, end, out);
  if (r.ec != std::errc{} || r.ptr != end) {
    throw CLI::ValidationError(flag, "expected a number, got '" + text + "'");
  }
  return out;
}

std::vector<double> parse_csv_numbers(const std::string& flag,
                                      const std::string& text, size_t want) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_field(flag, text.substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != want) {
    throw CLI::ValidationError(flag, "expected " + std::to_string(want) +
                                         " comma-separated numbers, got '" +
                                         text + "'");
  }
  return out;
}

Point parse_point(const std::string& text) {
  const auto v = parse_csv_numbers("--point", text, 2);
  return {v[0], v[1]};
}

std::pair<int, int> parse_size(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) {
    throw CLI::ValidationError("--size", "expected WxH, got '" + text + "'");
  }
  int w = 0, h = 0;
  const char* wb = text.data();
  const char* hb = text.data() + x + 1;
  const char* te = text.data() + text.size();
  const auto rw = std::from_chars(wb, wb + x, w);
  const auto rh = std::from_chars(hb, te, h);
  if (rw.ec != std::errc{} || rw.ptr != wb + x || rh.ec != std::errc{} ||
      rh.ptr != te) {
    throw CLI::ValidationError("--size", "expected WxH, got '" + text + "'");
  }
  return {w, h};
}

std::string json_point(const Point& z) {
  return "[" + json_number(z.x) + ", " + json_number(z.y) + "]";
}

std::string text_point(const Point& z) {
  return "(" + json_number(z.x) + ", " + json_number(z.y) + ")";
}

std::string json_interval(const Interval& v) {
  return "[" + json_number(v.lo) + ", " + json_number(v.hi) + "]";
}

int run_fixed_points(double c, bool as_json) {
  const FixedPoints fp = fixed_points(c);
  const ThreeCycle cyc = three_cycle(c);
  const std::string sa = to_string(stability(c, FixedTarget::Alpha).cls);
  const std::string st = to_string(stability(c, FixedTarget::Theta).cls);
  const std::string sc = to_string(stability(c, FixedTarget::Cycle).cls);
  if (as_json) {
    std::cout << "{\"c\": " << json_number(c) << ", \"a1\": " << json_number(fp.a1)
              << ", \"a2\": " << json_number(fp.a2)
              << ", \"alpha\": " << json_point(fp.alpha)
              << ", \"theta\": " << json_point(fp.theta) << ", \"cycle\": ["
              << json_point(cyc.p) << ", " << json_point(cyc.fp) << ", "
              << json_point(cyc.ffp) << "]"
              << ", \"alpha_stability\": " << json_string(sa)
              << ", \"theta_stability\": " << json_string(st)
              << ", \"cycle_stability\": " << json_string(sc) << "}\n";
  } else {
    std::cout << "c = " << json_number(c) << "\n"
              << "a1 = " << json_number(fp.a1) << "\n"
              << "a2 = " << json_number(fp.a2) << "\n"
              << "alpha = " << text_point(fp.alpha) << "\n"
              << "theta = " << text_point(fp.theta) << "\n"
              << "cycle = " << text_point(cyc.p) << " -> " << text_point(cyc.fp)
              << " -> " << text_point(cyc.ffp) << "\n"
              << "alpha_stability = " << sa << "\n"
              << "theta_stability = " << st << "\n"
              << "cycle_stability = " << sc << "\n";
  }
  return 0;
}

int run_classify(double c, const Point& z, Direction dir,
                 const ClassifyOptions& opt) {
  const char* cls;
  int iterations;
  StopReason stop;
  bool certified;
  if (dir == Direction::Forward) {
    const ForwardVerdict v = classify_forward(z, c, opt);
    cls = to_string(v.cls);
    iterations = v.iterations;
    stop = v.stop;
    certified = v.certified_regime;
  } else {
    const BackwardVerdict v = classify_backward(z, c, opt);
    cls = to_string(v.cls);
    iterations = v.iterations;
    stop = v.stop;
    certified = v.certified_regime;
  }
  std::cout << "class = " << cls << "\n"
            << "iterations = " << iterations << "\n"
            << "stop = " << to_string(stop) << "\n"
            << "certified_regime = " << (certified ? "true" : "false") << "\n";
  return 0;
}

int run_orbit(double c, const Point& z, int steps, Direction dir,
              const std::string& format, bool regions) {
  const OrbitRecord rec = orbit(z, c, steps, dir, regions);
  if (format == "json") {
    std::cout << "{\"c\": " << json_number(c) << ", \"direction\": "
              << json_string(dir == Direction::Forward ? "forward" : "backward")
              << ", \"stop\": " << json_string(to_string(rec.stop))
              << ", \"points\": [";
    for (size_t i = 0; i < rec.points.size(); ++i) {
      if (i > 0) std::cout << ", ";
      std::cout << json_point(rec.points[i]);
    }
    std::cout << "]";
    if (regions) {
      std::cout << ", \"regions\": [";
      for (size_t i = 0; i < rec.regions.size(); ++i) {
        if (i > 0) std::cout << ", ";
        std::cout << "[";
        for (size_t j = 0; j < rec.regions[i].size(); ++j) {
          if (j > 0) std::cout << ", ";
          std::cout << json_string(region_name(rec.regions[i][j]));
        }
        std::cout << "]";
      }
      std::cout << "]";
    }
    std::cout << "}\n";
    return 0;
  }
  std::cout << (regions ? "n,x,y,regions\n" : "n,x,y\n");
  for (size_t i = 0; i < rec.points.size(); ++i) {
    std::cout << i << "," << json_number(rec.points[i].x) << ","
              << json_number(rec.points[i].y);
    if (regions) {
      std::cout << ",";
      for (size_t j = 0; j < rec.regions[i].size(); ++j) {
        if (j > 0) std::cout << "|";
        std::cout << region_name(rec.regions[i][j]);
      }
    }
    std::cout << "\n";
  }
  if (rec.stop != StopReason::Completed) {
    std::cout << "# stopped early: " << to_string(rec.stop) << "\n";
  }
  return 0;
}

int run_sequences(double c, const std::string& kind, int n, double w) {
  if (kind == "fib") {
    std::cout << "fib_escape_index = " << fib_escape_index(c) << "\n";
    return 0;
  }
  std::cout << "n,value\n";
  if (kind == "cn") {
    const std::vector<double> cs = seq_cn(c, n);
    for (size_t i = 0; i < cs.size(); ++i) {
      std::cout << i << "," << json_number(cs[i]) << "\n";
    }
  } else {
    const std::vector<double> bs = seq_bn(c, w, n);
    for (size_t i = 0; i < bs.size(); ++i) {
      std::cout << i + 1 << "," << json_number(bs[i]) << "\n";
    }
  }
  return 0;
}

int run_certify(double c_lo, double c_hi, int depth, double r_max,
                const std::string& report_path) {
  CertifyOptions opt;
  opt.max_depth = depth;
  opt.r_max = r_max;
  const std::vector<Certificate> suite = certify_suite({c_lo, c_hi}, opt);

  std::ofstream report(report_path);
  if (!report) {
    throw std::runtime_error("cannot open " + report_path + " for writing");
  }
  long certified = 0, failed = 0, exceeded = 0;
  int max_depth_used = 0;
  for (const Certificate& cert : suite) {
    switch (cert.status) {
      case CertStatus::Certified: certified++; break;
      case CertStatus::Failed: failed++; break;
      case CertStatus::DepthExceeded: exceeded++; break;
    }
    max_depth_used = std::max(max_depth_used, cert.max_depth_used);
    report << "{\"claim\": " << json_string(cert.claim) << ", \"status\": "
           << json_string(cert_status_name(cert.status))
           << ", \"depth\": " << cert.max_depth_used
           << ", \"c\": " << json_interval(cert.c_interval);
    if (cert.counterexample) {
      report << ", \"counterexample\": {\"x\": "
             << json_interval(cert.counterexample->x)
             << ", \"y\": " << json_interval(cert.counterexample->y) << "}";
    }
    report << "}\n";
  }
  if (!report) throw std::runtime_error("write failed: " + report_path);

  std::cout << suite.size() << " claims: " << certified << " Certified, "
            << failed << " Failed, " << exceeded
            << " DepthExceeded (max depth used " << max_depth_used << ")\n"
            << "report: " << report_path << "\n";
  return certified == static_cast<long>(suite.size()) ? 0 : 3;
}

int run_render(double c, const std::string& set, const std::string& window,
               const std::string& size, const std::string& out_path,
               const std::string& stats_path, int workers,
               const ClassifyOptions& copt) {
  const Direction dir =
      set == "kplus" ? Direction::Forward : Direction::Backward;
  const auto [w, h] = parse_size(size);
  GridSpec grid = default_grid(dir, w, h);
  if (!window.empty()) {
    const auto v = parse_csv_numbers("--window", window, 4);
    grid.x_min = v[0];
    grid.x_max = v[1];
    grid.y_min = v[2];
    grid.y_max = v[3];
  }
  SweepOptions opt;
  opt.workers = workers;
  opt.classify = copt;
  const SweepResult r = sweep(grid, c, dir, opt);
  write_ppm(r.image,
            dir == Direction::Forward ? default_forward_palette()
                                      : default_backward_palette(),
            out_path);
  std::cout << "wrote " << out_path << " (" << grid.width << "x" << grid.height
            << ")\n";
  if (!stats_path.empty()) {
    std::ofstream stats(stats_path);
    if (!stats) {
      throw std::runtime_error("cannot open " + stats_path + " for writing");
    }
    stats << stats_json(r.stats) << "\n";
    if (!stats) throw std::runtime_error("write failed: " + stats_path);
    std::cout << "wrote " << stats_path << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed points, classification, certificates, and images for "
               "the map f(x,y) = (xy + c, x)"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value file supplying defaults for omitted flags");

  const Config builtin;

  double c = builtin.c;
  bool fp_json = false;
  CLI::App* fixed = app.add_subcommand("fixed-points",
                                       "fixed points, 3-cycle, stability");
  auto* fixed_c = fixed->add_option("--c", c, "parameter c")
                      ->capture_default_str();
  fixed->add_flag("--json", fp_json, "emit JSON instead of key = value text");

  std::string point_text;
  std::string direction = "forward";
  int max_iter = builtin.max_iter;
  double tol = builtin.tol;
  CLI::App* classify = app.add_subcommand("classify",
                                          "classify one orbit by direction");
  auto* classify_c = classify->add_option("--c", c, "parameter c")
                         ->capture_default_str();
  classify->add_option("--point", point_text, "start point as x,y")->required();
  classify->add_option("--direction", direction, "orbit direction")
      ->check(CLI::IsMember({"forward", "backward"}))
      ->required();
  auto* classify_iter =
      classify->add_option("--max-iter", max_iter, "iteration budget")
          ->capture_default_str();
  auto* classify_tol =
      classify->add_option("--tol", tol, "candidate threshold")
          ->capture_default_str();

  int steps = 20;
  std::string format = "csv";
  bool trace_regions = false;
  CLI::App* orb = app.add_subcommand("orbit", "print an orbit segment");
  auto* orbit_c = orb->add_option("--c", c, "parameter c")->capture_default_str();
  orb->add_option("--point", point_text, "start point as x,y")->required();
  orb->add_option("--steps", steps, "number of steps")->capture_default_str();
  orb->add_option("--direction", direction, "orbit direction")
      ->check(CLI::IsMember({"forward", "backward"}))
      ->required();
  orb->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  orb->add_flag("--regions", trace_regions, "annotate region membership");

  std::string kind;
  int seq_n = 20;
  double seq_w = 1.0;
  CLI::App* seq = app.add_subcommand("sequences", "scalar sequences");
  auto* seq_c = seq->add_option("--c", c, "parameter c")->capture_default_str();
  seq->add_option("--kind", kind, "cn (critical orbit), bn (return envelope), "
                                  "fib (escape index)")
      ->check(CLI::IsMember({"cn", "bn", "fib"}))
      ->required();
  seq->add_option("--n", seq_n, "number of terms")->capture_default_str();
  auto* seq_w_opt = seq->add_option("--w", seq_w, "start value for bn")
                        ->capture_default_str();

  double c_lo = 0.0, c_hi = 0.0;
  int depth = builtin.max_depth;
  double r_max = builtin.r_max;
  std::string report_path = builtin.report;
  CLI::App* cert = app.add_subcommand("certify",
                                      "certify the transition lemma corpus");
  cert->add_option("--c-lo", c_lo, "parameter interval lower end")->required();
  cert->add_option("--c-hi", c_hi, "parameter interval upper end")->required();
  auto* cert_depth = cert->add_option("--depth", depth, "subdivision depth cap")
                         ->capture_default_str();
  auto* cert_rmax =
      cert->add_option("--r-max", r_max, "unbounded-side truncation for splits")
          ->capture_default_str();
  auto* cert_report = cert->add_option("--report", report_path,
                                       "JSONL certificate report path")
                          ->capture_default_str();

  std::string set = "kplus";
  std::string window;
  std::string size = "512x512";
  std::string out_path = builtin.out;
  std::string stats_path = builtin.stats;
  int workers = 0;
  CLI::App* render = app.add_subcommand("render", "classify a pixel grid");
  auto* render_c = render->add_option("--c", c, "parameter c")
                       ->capture_default_str();
  render->add_option("--set", set, "which filled set to sweep")
      ->check(CLI::IsMember({"kplus", "kminus"}))
      ->required();
  render->add_option("--window", window,
                     "viewport as x0,x1,y0,y1 (default fits the set)");
  render->add_option("--size", size, "image size as WxH")->capture_default_str();
  auto* render_out = render->add_option("--out", out_path, "output PPM path")
                         ->capture_default_str();
  auto* render_stats = render->add_option("--stats", stats_path,
                                          "also write JSON class counts");
  render->add_option("--workers", workers,
                     "worker threads (0 = hardware concurrency)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Config cfg = load_config(config_path);
    if (!*fixed_c && !*classify_c && !*orbit_c && !*seq_c && !*render_c) {
      c = cfg.c;
    }
    if (!*classify_iter) max_iter = cfg.max_iter;
    if (!*classify_tol) tol = cfg.tol;
    if (!*cert_depth) depth = cfg.max_depth;
    if (!*cert_rmax) r_max = cfg.r_max;
    if (!*cert_report) report_path = cfg.report;
    if (!*render_out) out_path = cfg.out;
    if (!*render_stats) stats_path = cfg.stats;
    ClassifyOptions copt;
    copt.max_iter = max_iter;
    copt.tol = tol;
    copt.escape_radius = cfg.escape_radius;

    if (app.got_subcommand(fixed)) return run_fixed_points(c, fp_json);
    if (app.got_subcommand(classify)) {
      const Direction dir = direction == "forward" ? Direction::Forward
                                                   : Direction::Backward;
      return run_classify(c, parse_point(point_text), dir, copt);
    }
    if (app.got_subcommand(orb)) {
      const Direction dir = direction == "forward" ? Direction::Forward
                                                   : Direction::Backward;
      return run_orbit(c, parse_point(point_text), steps, dir, format,
                       trace_regions);
    }
    if (app.got_subcommand(seq)) {
      if (kind == "bn" && !*seq_w_opt) {
        // Default the envelope start to the inner-square corner scale.
        seq_w = std::abs(fixed_points(c).a1);
      }
      return run_sequences(c, kind, seq_n, seq_w);
    }
    if (app.got_subcommand(cert)) {
      return run_certify(c_lo, c_hi, depth, r_max, report_path);
    }
    if (app.got_subcommand(render)) {
      return run_render(c, set, window, size, out_path, stats_path, workers,
                        copt);
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    const std::string sub =
        app.get_subcommands().empty() ? "fibjulia"
                                      : app.get_subcommands().front()->get_name();
    std::cerr << "fibjulia " << sub << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
