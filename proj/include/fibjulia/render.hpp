#pragma once

// Grid sweeps over the plane: classify every pixel center independently and
// assemble an image plus class counts.  Work is split by rows across
// threads, but each pixel depends only on its own center, so the result is
// byte-identical for any worker count.

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fibjulia/classifier.hpp"
#include "fibjulia/core.hpp"
#include "fibjulia/jsonio.hpp"

namespace fibjulia {

struct GridSpec {
  double x_min = -2.5, x_max = 2.5;
  double y_min = -2.5, y_max = 2.5;
  int width = 512, height = 512;
};

inline void validate(const GridSpec& g) {
  if (!(g.x_min < g.x_max) || !(g.y_min < g.y_max)) {
    throw std::invalid_argument("grid window must have positive extent");
  }
  if (g.width < 1 || g.height < 1) {
    throw std::invalid_argument("grid must be at least 1x1");
  }
}

// Row 0 sits at the top of the window (image convention); samples are cell
// centers.
inline Point pixel_center(const GridSpec& g, int col, int row) {
  return {g.x_min + (g.x_max - g.x_min) * (col + 0.5) / g.width,
          g.y_max - (g.y_max - g.y_min) * (row + 0.5) / g.height};
}

// The paper-style viewports: all fixed points, the cycle, and the trap
// square fit with margin.
inline GridSpec default_grid(Direction dir, int width, int height) {
  const double r = dir == Direction::Forward ? 2.5 : 3.0;
  return {-r, r, -r, r, width, height};
}

struct ClassImage {
  int width = 0, height = 0;
  Direction direction = Direction::Forward;
  std::vector<std::uint8_t> codes;  // row-major class tags
};

struct Stats {
  double c = 0.0;
  GridSpec grid;
  long total = 0;
  std::vector<std::pair<std::string, long>> counts;  // one row per class tag
};

struct SweepOptions {
  int workers = 1;  // 0 picks the hardware concurrency
  ClassifyOptions classify;
};

inline const std::vector<ForwardClass>& forward_classes() {
  static const std::vector<ForwardClass> all = {
      ForwardClass::FixedAlpha,           ForwardClass::FixedTheta,
      ForwardClass::ThreeCycleMember,     ForwardClass::AttractingBasin,
      ForwardClass::ThetaStableCandidate, ForwardClass::CycleStableCandidate,
      ForwardClass::Escaping,             ForwardClass::Undecided,
  };
  return all;
}

inline const std::vector<BackwardClass>& backward_classes() {
  static const std::vector<BackwardClass> all = {
      BackwardClass::FixedAlpha,
      BackwardClass::ThetaUnstableCandidate,
      BackwardClass::CycleUnstableCandidate,
      BackwardClass::BackwardEscaping,
      BackwardClass::PreimageFailure,
      BackwardClass::Undecided,
  };
  return all;
}

inline Stats stats_summary(const ClassImage& img, double c, const GridSpec& g) {
  Stats st;
  st.c = c;
  st.grid = g;
  st.total = static_cast<long>(img.codes.size());
  std::vector<long> tally(256, 0);
  for (std::uint8_t code : img.codes) tally[code]++;
  if (img.direction == Direction::Forward) {
    for (ForwardClass t : forward_classes()) {
      st.counts.emplace_back(to_string(t), tally[static_cast<int>(t)]);
    }
  } else {
    for (BackwardClass t : backward_classes()) {
      st.counts.emplace_back(to_string(t), tally[static_cast<int>(t)]);
    }
  }
  return st;
}

struct SweepResult {
  ClassImage image;
  Stats stats;
};

inline SweepResult sweep(const GridSpec& grid, double c, Direction dir,
                         const SweepOptions& opt = {}) {
  validate(grid);
  ClassImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.direction = dir;
  img.codes.resize(static_cast<size_t>(grid.width) * grid.height);

  const auto classify_pixel = [&](int col, int row) -> std::uint8_t {
    const Point z = pixel_center(grid, col, row);
    try {
      if (dir == Direction::Forward) {
        return static_cast<std::uint8_t>(classify_forward(z, c, opt.classify).cls);
      }
      return static_cast<std::uint8_t>(classify_backward(z, c, opt.classify).cls);
    } catch (...) {
      return dir == Direction::Forward
                 ? static_cast<std::uint8_t>(ForwardClass::Undecided)
                 : static_cast<std::uint8_t>(BackwardClass::Undecided);
    }
  };
  const auto run_rows = [&](int row_begin, int row_end) {
    for (int row = row_begin; row < row_end; ++row) {
      for (int col = 0; col < grid.width; ++col) {
        img.codes[static_cast<size_t>(row) * grid.width + col] =
            classify_pixel(col, row);
      }
    }
  };

  int workers = opt.workers;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min(workers, grid.height);
  if (workers <= 1) {
    run_rows(0, grid.height);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int row_begin = static_cast<int>(
          static_cast<long>(grid.height) * w / workers);
      const int row_end = static_cast<int>(
          static_cast<long>(grid.height) * (w + 1) / workers);
      pool.emplace_back(run_rows, row_begin, row_end);
    }
    for (std::thread& t : pool) t.join();
  }

  SweepResult out;
  out.stats = stats_summary(img, c, grid);
  out.image = std::move(img);
  return out;
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

using Palette = std::map<std::uint8_t, Rgb>;

// Exact fixed-point and cycle hits render in the color of the matching
// stable-set candidate class; they occur only when a pixel center lands on
// the point to within the exact tolerance.
inline Palette default_forward_palette() {
  using F = ForwardClass;
  const auto key = [](F t) { return static_cast<std::uint8_t>(t); };
  return {
      {key(F::FixedAlpha), {40, 40, 40}},
      {key(F::FixedTheta), {200, 0, 0}},
      {key(F::ThreeCycleMember), {0, 0, 200}},
      {key(F::AttractingBasin), {40, 40, 40}},
      {key(F::ThetaStableCandidate), {200, 0, 0}},
      {key(F::CycleStableCandidate), {0, 0, 200}},
      {key(F::Escaping), {255, 255, 255}},
      {key(F::Undecided), {120, 120, 120}},
  };
}

inline Palette default_backward_palette() {
  using B = BackwardClass;
  const auto key = [](B t) { return static_cast<std::uint8_t>(t); };
  return {
      {key(B::FixedAlpha), {40, 40, 40}},
      {key(B::ThetaUnstableCandidate), {200, 0, 0}},
      {key(B::CycleUnstableCandidate), {0, 0, 200}},
      {key(B::BackwardEscaping), {255, 255, 255}},
      {key(B::PreimageFailure), {255, 255, 255}},
      {key(B::Undecided), {120, 120, 120}},
  };
}

inline void write_ppm(const ClassImage& img, const Palette& palette,
                      const std::string& path) {
  for (std::uint8_t code : img.codes) {
    if (palette.find(code) == palette.end()) {
      const std::string tag =
          img.direction == Direction::Forward
              ? to_string(static_cast<ForwardClass>(code))
              : to_string(static_cast<BackwardClass>(code));
      throw std::invalid_argument("palette has no color for class " +
                                  std::string(tag));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<char> row(static_cast<size_t>(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Rgb rgb =
          palette.at(img.codes[static_cast<size_t>(y) * img.width + x]);
      row[3 * x + 0] = static_cast<char>(rgb.r);
      row[3 * x + 1] = static_cast<char>(rgb.g);
      row[3 * x + 2] = static_cast<char>(rgb.b);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string stats_json(const Stats& st) {
  std::string out = "{\"c\": " + json_number(st.c) + ", \"counts\": {";
  for (size_t i = 0; i < st.counts.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_string(st.counts[i].first) + ": " +
           json_number(st.counts[i].second);
  }
  out += "}, \"grid\": {\"x_min\": " + json_number(st.grid.x_min) +
         ", \"x_max\": " + json_number(st.grid.x_max) +
         ", \"y_min\": " + json_number(st.grid.y_min) +
         ", \"y_max\": " + json_number(st.grid.y_max) +
         ", \"width\": " + json_number(st.grid.width) +
         ", \"height\": " + json_number(st.grid.height) + "}}";
  return out;
}

} // namespace fibjulia
