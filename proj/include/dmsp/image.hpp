#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmsp/linalg.hpp"
#include "dmsp/rng.hpp"

namespace dmsp {

// Grayscale image with values on the [0,1] scale. Intermediate pipeline
// stages may hold values outside [0,1] (e.g. after adding noise); clipping
// happens on PGM output.
struct GrayImage {
  int width = 0;
  int height = 0;
  Matrix values;  // height x width

  static GrayImage constant(int width, int height, double v);
};

// Binary 8-bit PGM (P5). Reading maps [0,255] to [0,1]; writing clips to
// [0,1] and rounds to the nearest of 256 levels.
GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

// 10 log10(1 / MSE) with peak 1.0; +inf for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

// Adds iid N(0, variance) to every pixel; no clipping.
GrayImage add_gaussian_noise(const GrayImage& img, double variance, Rng& rng);

// All overlapping k x k patches at stride 1, one column each (column-major
// within the patch), in row-major patch-origin order. Each column's mean is
// removed and kept when remove_means is set.
struct PatchSet {
  int k = 0;
  int width = 0;   // source image width
  int height = 0;  // source image height
  bool means_removed = false;
  Matrix patches;           // k*k x count
  Eigen::VectorXd means;    // per column; zero when !means_removed

  int count() const { return static_cast<int>(patches.cols()); }
};

PatchSet extract_patches(const GrayImage& img, int k, bool remove_means = true);

// Places columns back at their origins, re-adding stored means, and averages
// overlapping contributions per pixel. Inverse of extract_patches when the
// coefficients are untouched.
GrayImage reconstruct_from_patches(const PatchSet& ps);

GrayImage clip01(const GrayImage& img);

struct DenoiseConfig {
  int iterations = 30;
  int t_c = 2;
  int nodes = 36;
  double edge_prob = 0.5;
  bool directed = false;
  std::uint64_t seed = 42;
  double threshold_mult = 3.0;  // hard threshold at threshold_mult * sigma
  bool remove_means = true;
  bool fast = false;  // learn on every 4th patch, reconstruct from all
};

struct DenoiseResult {
  GrayImage output;
  Matrix dictionary_t;  // the learned analysis transform (A, orthogonal)
  long degenerate_projections = 0;
  long thresholded_coeffs = 0;
};

// Learns an orthogonal transform on the noisy image's patches with the
// decentralized iteration, hard-thresholds analysis coefficients at
// threshold_mult * sigma, reconstructs, and clips.
DenoiseResult denoise(const GrayImage& noisy, double sigma,
                      const DenoiseConfig& cfg);

}  // namespace dmsp
