#include "dmsp/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dmsp/data.hpp"
#include "dmsp/learner.hpp"
#include "dmsp/network.hpp"

namespace dmsp {

GrayImage GrayImage::constant(int width, int height, double v) {
  GrayImage img;
  img.width = width;
  img.height = height;
  img.values = Matrix::Constant(height, width, v);
  return img;
}

namespace {

// Skips whitespace and # comment lines between PGM header tokens.
int next_pgm_int(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = -1;
  if (!(in >> v)) throw std::runtime_error("pgm: malformed header");
  return v;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path);
  char m0 = 0, m1 = 0;
  in.get(m0).get(m1);
  if (m0 != 'P' || m1 != '5')
    throw std::runtime_error("pgm: not a binary P5 file: " + path);
  int width = next_pgm_int(in);
  int height = next_pgm_int(in);
  int maxval = next_pgm_int(in);
  if (width <= 0 || height <= 0 || maxval != 255)
    throw std::runtime_error("pgm: unsupported dimensions or maxval in " + path);
  in.get();  // single whitespace byte before raster
  std::vector<unsigned char> raster(static_cast<size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (static_cast<size_t>(in.gcount()) != raster.size())
    throw std::runtime_error("pgm: truncated raster in " + path);
  GrayImage img;
  img.width = width;
  img.height = height;
  img.values.resize(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      img.values(r, c) = raster[static_cast<size_t>(r) * width + c] / 255.0;
  return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.values.rows() != img.height || img.values.cols() != img.width)
    throw std::invalid_argument("pgm: inconsistent image dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raster(static_cast<size_t>(img.width) *
                                    img.height);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double v = std::min(1.0, std::max(0.0, img.values(r, c)));
      raster[static_cast<size_t>(r) * img.width + c] =
          static_cast<unsigned char>(std::lround(v * 255.0));
    }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw std::runtime_error("pgm: short write to " + path);
}

double psnr(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("psnr: size mismatch");
  double mse = (a.values - b.values).squaredNorm() /
               (static_cast<double>(a.width) * a.height);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

GrayImage add_gaussian_noise(const GrayImage& img, double variance, Rng& rng) {
  if (variance < 0.0)
    throw std::invalid_argument("add_gaussian_noise: negative variance");
  double sigma = std::sqrt(variance);
  GrayImage out = img;
  for (int r = 0; r < out.height; ++r)
    for (int c = 0; c < out.width; ++c)
      out.values(r, c) += sigma * rng.normal();
  return out;
}

PatchSet extract_patches(const GrayImage& img, int k, bool remove_means) {
  if (k <= 0 || k > img.width || k > img.height)
    throw std::invalid_argument("extract_patches: bad patch size");
  int rows = img.height - k + 1;
  int cols = img.width - k + 1;
  PatchSet ps;
  ps.k = k;
  ps.width = img.width;
  ps.height = img.height;
  ps.means_removed = remove_means;
  ps.patches.resize(k * k, static_cast<Eigen::Index>(rows) * cols);
  ps.means = Eigen::VectorXd::Zero(ps.patches.cols());
  Eigen::Index col = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++col) {
      Eigen::Map<Matrix>(ps.patches.col(col).data(), k, k) =
          img.values.block(r, c, k, k);
      if (remove_means) {
        double m = ps.patches.col(col).mean();
        ps.means(col) = m;
        ps.patches.col(col).array() -= m;
      }
    }
  return ps;
}

GrayImage reconstruct_from_patches(const PatchSet& ps) {
  int k = ps.k;
  int rows = ps.height - k + 1;
  int cols = ps.width - k + 1;
  if (ps.patches.rows() != k * k ||
      ps.patches.cols() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("reconstruct_from_patches: inconsistent set");
  Matrix acc = Matrix::Zero(ps.height, ps.width);
  Matrix cnt = Matrix::Zero(ps.height, ps.width);
  Eigen::Index col = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++col) {
      acc.block(r, c, k, k) +=
          Eigen::Map<const Matrix>(ps.patches.col(col).data(), k, k);
      acc.block(r, c, k, k).array() += ps.means(col);
      cnt.block(r, c, k, k).array() += 1.0;
    }
  GrayImage out;
  out.width = ps.width;
  out.height = ps.height;
  out.values = acc.array() / cnt.array();
  return out;
}

GrayImage clip01(const GrayImage& img) {
  GrayImage out = img;
  out.values = out.values.array().min(1.0).max(0.0);
  return out;
}

DenoiseResult denoise(const GrayImage& noisy, double sigma,
                      const DenoiseConfig& cfg) {
  if (sigma < 0.0) throw std::invalid_argument("denoise: negative sigma");
  const int k = 8;
  PatchSet ps = extract_patches(noisy, k, cfg.remove_means);
  const int dim = k * k;

  // Optionally learn on a patch subsample; coding always sees every patch.
  Matrix train;
  if (cfg.fast) {
    Eigen::Index kept = (ps.patches.cols() + 3) / 4;
    train.resize(dim, kept);
    for (Eigen::Index j = 0; j < kept; ++j) train.col(j) = ps.patches.col(4 * j);
  }
  const Matrix& y = cfg.fast ? train : ps.patches;

  TimeVaryingNetwork net{cfg.nodes, cfg.edge_prob, cfg.directed,
                         Rng::derive(cfg.seed, 0x6e6574, 0)};
  auto partition = partition_columns(static_cast<int>(y.cols()), cfg.nodes);
  LearnResult learned = dmsp_learn(y, partition, net, cfg.iterations, cfg.t_c,
                                   Matrix::Identity(dim, dim));

  DenoiseResult res;
  for (long d : learned.degenerate_per_node) res.degenerate_projections += d;
  res.dictionary_t = learned.a_list[0];  // any node's transform; pick the first

  // Analysis, hard threshold, synthesis — in column blocks to bound memory.
  const Matrix& a = res.dictionary_t;
  double cut = cfg.threshold_mult * sigma;
  Matrix recon(dim, ps.patches.cols());
  const Eigen::Index block = 50000;
  for (Eigen::Index j0 = 0; j0 < ps.patches.cols(); j0 += block) {
    Eigen::Index bc = std::min(block, ps.patches.cols() - j0);
    Matrix coeff = a * ps.patches.middleCols(j0, bc);
    res.thresholded_coeffs += (coeff.array().abs() <= cut).count();
    coeff = (coeff.array().abs() > cut).select(coeff, 0.0);
    recon.middleCols(j0, bc) = a.transpose() * coeff;
  }

  PatchSet out = ps;
  out.patches = std::move(recon);
  res.output = clip01(reconstruct_from_patches(out));
  return res;
}

}  // namespace dmsp
