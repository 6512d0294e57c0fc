// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gem/nn/matrix.hpp"
#include "gem/random.hpp"

namespace gem::nn {

struct Dataset {
  Matrix features;  // samples × features
  std::vector<int> labels;
  int classes = 0;

  std::size_t size() const { return labels.size(); }
};

enum class SyntheticKind { Blobs, Spirals };

/// Two-class toy problems, deterministic in `seed`.
///  blobs:   Gaussian clouds around (-1, -1) and (1, 1), standard deviation `noise`.
///  spirals: two interleaved Archimedean spirals r = θ/θ_max over 1.75 turns,
///           the second rotated by π, with Gaussian jitter of size `noise`.
/// Samples alternate by class.
inline Dataset make_synthetic(SyntheticKind kind, std::size_t n_per_class, double noise, std::uint64_t seed) {
  if (n_per_class < 1) throw std::invalid_argument("n_per_class must be at least 1");
  if (!(noise >= 0)) throw std::invalid_argument("noise must be non-negative");
  Rng rng(seed);
  Dataset ds{Matrix(2 * n_per_class, 2), std::vector<int>(2 * n_per_class), 2};
  constexpr double kTurns = 1.75;
  const double theta_max = 2.0 * std::numbers::pi * kTurns;
  for (std::size_t i = 0; i < n_per_class; ++i) {
    for (int c = 0; c < 2; ++c) {
      const std::size_t row = 2 * i + static_cast<std::size_t>(c);
      double x = 0;
      double y = 0;
      if (kind == SyntheticKind::Blobs) {
        const double centre = c == 0 ? -1.0 : 1.0;
        x = centre;
        y = centre;
      } else {
        const double theta = theta_max * (static_cast<double>(i) + 0.5) / static_cast<double>(n_per_class);
        const double r = theta / theta_max;
        const double phase = c == 0 ? 0.0 : std::numbers::pi;
        x = r * std::cos(theta + phase);
        y = r * std::sin(theta + phase);
      }
      ds.features(row, 0) = x + noise * rng.normal();
      ds.features(row, 1) = y + noise * rng.normal();
      ds.labels[row] = c;
    }
  }
  return ds;
}

class IdxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError("cannot open IDX file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                               const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) {
    throw IdxError("truncated IDX file " + path.string() + ": header needs " + std::to_string(offset + 4) +
                   " bytes, file has " + std::to_string(bytes.size()));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

inline std::string hex32(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex;
  s.width(8);
  s.fill('0');
  s << v;
  return s.str();
}

inline void expect_magic(std::uint32_t got, std::uint32_t want, const std::filesystem::path& path) {
  if (got != want) {
    throw IdxError("bad IDX magic in " + path.string() + ": expected " + hex32(want) + ", got " + hex32(got));
  }
}

}  // namespace detail

/// Reads an IDX image file (magic 0x00000803, u8 pixels) and its label file
/// (magic 0x00000801). Pixels are scaled to [0, 1]; each image becomes one
/// row of rows·cols features. The class count is max label + 1.
inline Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const auto img = detail::read_file(images_path);
  const auto lab = detail::read_file(labels_path);

  detail::expect_magic(detail::read_be32(img, 0, images_path), 0x00000803U, images_path);
  const std::uint32_t count = detail::read_be32(img, 4, images_path);
  const std::uint32_t rows = detail::read_be32(img, 8, images_path);
  const std::uint32_t cols = detail::read_be32(img, 12, images_path);
  const std::size_t pixels = std::size_t{rows} * cols;
  const std::size_t need = 16 + std::size_t{count} * pixels;
  if (img.size() < need) {
    throw IdxError("truncated IDX image file " + images_path.string() + ": expected " + std::to_string(need) +
                   " bytes, got " + std::to_string(img.size()));
  }

  detail::expect_magic(detail::read_be32(lab, 0, labels_path), 0x00000801U, labels_path);
  const std::uint32_t label_count = detail::read_be32(lab, 4, labels_path);
  if (label_count != count) {
    throw IdxError("IDX dimension mismatch: " + std::to_string(count) + " images but " +
                   std::to_string(label_count) + " labels");
  }
  if (lab.size() < 8 + std::size_t{count}) {
    throw IdxError("truncated IDX label file " + labels_path.string() + ": expected " +
                   std::to_string(8 + std::size_t{count}) + " bytes, got " + std::to_string(lab.size()));
  }

  Dataset ds{Matrix(count, pixels), std::vector<int>(count), 0};
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t p = 0; p < pixels; ++p) ds.features(i, p) = img[16 + i * pixels + p] / 255.0;
    ds.labels[i] = lab[8 + i];
    ds.classes = std::max(ds.classes, ds.labels[i] + 1);
  }
  return ds;
}

}  // namespace gem::nn
