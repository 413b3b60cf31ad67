#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "dmsp/image.hpp"
#include "dmsp/rng.hpp"

using dmsp::GrayImage;
using dmsp::Matrix;
using dmsp::Rng;

namespace {

GrayImage textured(int w, int h, double lo = 0.1, double hi = 0.9) {
  GrayImage img = GrayImage::constant(w, h, 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double x = static_cast<double>(c) / w, y = static_cast<double>(r) / h;
      double v = 0.45 + 0.25 * x + 0.15 * std::sin(8.0 * y) +
                 0.1 * std::sin(11.0 * (x + y));
      img.values(r, c) = std::min(hi, std::max(lo, v));
    }
  return img;
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("pgm round-trip is exact on quantized values") {
  GrayImage img = GrayImage::constant(7, 5, 0.0);
  int level = 0;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 7; ++c) img.values(r, c) = (level++ % 256) / 255.0;

  const std::string path = "roundtrip_test.pgm";
  dmsp::write_pgm(path, img);
  GrayImage back = dmsp::read_pgm(path);
  CHECK(back.width == 7);
  CHECK(back.height == 5);
  CHECK((back.values - img.values).norm() == 0.0);

  std::ifstream in(path, std::ios::binary);
  std::string header(9, '\0');
  in.read(header.data(), 9);
  CHECK(header == "P5\n7 5\n25");  // "P5\n7 5\n255\n" + raster follows
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("pgm writer clips and rounds to the nearest level") {
  GrayImage img = GrayImage::constant(3, 1, 0.0);
  img.values(0, 0) = -0.4;            // clips to 0
  img.values(0, 1) = 1.7;             // clips to 255
  img.values(0, 2) = 100.4999 / 255;  // rounds down to 100
  const std::string path = "clipround_test.pgm";
  dmsp::write_pgm(path, img);
  GrayImage back = dmsp::read_pgm(path);
  CHECK(back.values(0, 0) == 0.0);
  CHECK(back.values(0, 1) == 1.0);
  CHECK(back.values(0, 2) == doctest::Approx(100.0 / 255).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("pgm reader skips comments and whitespace in the header") {
  const std::string path = "comments_test.pgm";
  std::string bytes = "P5\n# size comes next\n 3 \n#more\n2\n255\n";
  unsigned char px[] = {0, 128, 255, 10, 20, 30};
  bytes.append(reinterpret_cast<const char*>(px), 6);
  write_bytes(path, bytes);
  GrayImage img = dmsp::read_pgm(path);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.values(0, 0) == 0.0);
  CHECK(img.values(0, 1) == doctest::Approx(128.0 / 255).epsilon(1e-15));
  CHECK(img.values(0, 2) == 1.0);
  CHECK(img.values(1, 0) == doctest::Approx(10.0 / 255).epsilon(1e-15));
  CHECK(img.values(1, 2) == doctest::Approx(30.0 / 255).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("pgm reader rejects wrong magic, maxval, and truncation") {
  const std::string p1 = "bad_magic.pgm";
  write_bytes(p1, std::string("P6\n2 2\n255\n") + std::string(12, 'x'));
  CHECK_THROWS(dmsp::read_pgm(p1));
  std::remove(p1.c_str());

  const std::string p2 = "bad_maxval.pgm";
  write_bytes(p2, std::string("P5\n2 2\n65535\n") + std::string(8, 'x'));
  CHECK_THROWS(dmsp::read_pgm(p2));
  std::remove(p2.c_str());

  const std::string p3 = "truncated.pgm";
  write_bytes(p3, std::string("P5\n4 4\n255\n") + std::string(7, 'x'));
  CHECK_THROWS(dmsp::read_pgm(p3));
  std::remove(p3.c_str());

  CHECK_THROWS(dmsp::read_pgm("no_such_file.pgm"));
}

TEST_CASE("psnr: exact values, infinity, and size checks") {
  GrayImage a = GrayImage::constant(64, 32, 0.3);
  GrayImage b = GrayImage::constant(64, 32, 0.35);
  // MSE = 0.0025 -> 10 log10(400)
  CHECK(dmsp::psnr(a, b) ==
        doctest::Approx(10.0 * std::log10(400.0)).epsilon(1e-14));
  CHECK(std::isinf(dmsp::psnr(a, a)));
  GrayImage c = GrayImage::constant(32, 64, 0.3);
  CHECK_THROWS(dmsp::psnr(a, c));
}

TEST_CASE("gaussian noise hits the requested moments and clips nothing") {
  GrayImage clean = GrayImage::constant(256, 256, 0.02);
  const double variance = 0.01;
  Rng rng(7);
  GrayImage noisy = dmsp::add_gaussian_noise(clean, variance, rng);
  Matrix diff = noisy.values - clean.values;
  const double n = 256.0 * 256.0;
  double mean = diff.sum() / n;
  double var = diff.squaredNorm() / n - mean * mean;
  CHECK(std::abs(mean) <= 5.0 * std::sqrt(variance / n));
  CHECK(std::abs(var - variance) <= 5.0 * variance * std::sqrt(2.0 / n));
  // sigma = 0.1 around 0.02: negative pixels must survive unclipped
  CHECK(diff.minCoeff() < -0.02);
  CHECK((noisy.values.array() < 0.0).any());

  Rng rng2(7);
  GrayImage again = dmsp::add_gaussian_noise(clean, variance, rng2);
  CHECK((again.values - noisy.values).norm() == 0.0);

  CHECK_THROWS(dmsp::add_gaussian_noise(clean, -1e-9, rng));
  Rng rng3(8);
  GrayImage silent = dmsp::add_gaussian_noise(clean, 0.0, rng3);
  CHECK((silent.values - clean.values).norm() == 0.0);

  // the corrupted PSNR concentrates at 10 log10(1/variance)
  GrayImage mid = GrayImage::constant(256, 256, 0.5);
  Rng rng4(9);
  GrayImage noisy_mid = dmsp::add_gaussian_noise(mid, 0.0025, rng4);
  CHECK(dmsp::psnr(mid, noisy_mid) ==
        doctest::Approx(10.0 * std::log10(1.0 / 0.0025)).epsilon(0.01));
}

TEST_CASE("patch extraction: counts, entry mapping, and mean removal") {
  Rng rng(11);
  GrayImage img = GrayImage::constant(12, 10, 0.0);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 12; ++c) img.values(r, c) = rng.uniform();

  const int k = 3;
  dmsp::PatchSet ps = dmsp::extract_patches(img, k, true);
  REQUIRE(ps.count() == (10 - k + 1) * (12 - k + 1));
  REQUIRE(ps.patches.rows() == k * k);
  CHECK(ps.k == k);
  CHECK(ps.means_removed);

  // column = patch origin in row-major order; within a column the patch is
  // stored column-major
  const int cols_per_row = 12 - k + 1;
  for (int r0 = 0; r0 <= 10 - k; ++r0)
    for (int c0 = 0; c0 <= 12 - k; ++c0) {
      int col = r0 * cols_per_row + c0;
      double mean_check = 0.0;
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
          CHECK(ps.patches(j * k + i, col) + ps.means(col) ==
                doctest::Approx(img.values(r0 + i, c0 + j)).epsilon(1e-14));
          mean_check += img.values(r0 + i, c0 + j);
        }
      CHECK(ps.means(col) ==
            doctest::Approx(mean_check / (k * k)).epsilon(1e-13));
      CHECK(std::abs(ps.patches.col(col).sum()) <= 1e-12);
    }

  dmsp::PatchSet raw = dmsp::extract_patches(img, k, false);
  CHECK(!raw.means_removed);
  CHECK(raw.means.norm() == 0.0);
  CHECK(raw.patches(0, 0) == img.values(0, 0));

  // k equal to one dimension still yields one row of patches
  dmsp::PatchSet edge = dmsp::extract_patches(img, 10, true);
  CHECK(edge.count() == 3);

  CHECK_THROWS(dmsp::extract_patches(img, 11, true));
  CHECK_THROWS(dmsp::extract_patches(img, 0, true));

  GrayImage flat = GrayImage::constant(6, 6, 0.42);
  dmsp::PatchSet fp = dmsp::extract_patches(flat, 3, true);
  CHECK(fp.patches.norm() == 0.0);
  CHECK((fp.means.array() - 0.42).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("patch reconstruction inverts extraction") {
  Rng rng(12);
  GrayImage img = GrayImage::constant(17, 13, 0.0);
  for (int r = 0; r < 13; ++r)
    for (int c = 0; c < 17; ++c) img.values(r, c) = rng.uniform();

  for (bool remove : {true, false}) {
    dmsp::PatchSet ps = dmsp::extract_patches(img, 4, remove);
    GrayImage back = dmsp::reconstruct_from_patches(ps);
    CHECK(back.width == 17);
    CHECK(back.height == 13);
    CHECK((back.values - img.values).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // zero patches and zero means reconstruct to a zero image
  dmsp::PatchSet ps = dmsp::extract_patches(img, 4, true);
  ps.patches.setZero();
  ps.means.setZero();
  CHECK(dmsp::reconstruct_from_patches(ps).values.norm() == 0.0);
}

TEST_CASE("clip01 clamps both tails and keeps the middle") {
  GrayImage img = GrayImage::constant(3, 1, 0.0);
  img.values(0, 0) = -0.5;
  img.values(0, 1) = 0.3;
  img.values(0, 2) = 1.7;
  GrayImage c = dmsp::clip01(img);
  CHECK(c.values(0, 0) == 0.0);
  CHECK(c.values(0, 1) == 0.3);
  CHECK(c.values(0, 2) == 1.0);
}

TEST_CASE("denoising with zero sigma is a lossless round trip") {
  GrayImage img = textured(48, 48);
  dmsp::DenoiseConfig cfg;
  cfg.iterations = 3;
  cfg.t_c = 1;
  cfg.nodes = 4;
  cfg.seed = 5;
  dmsp::DenoiseResult res = dmsp::denoise(img, 0.0, cfg);
  CHECK((res.output.values - img.values).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(dmsp::is_orthogonal(res.dictionary_t, 1e-8));
}

TEST_CASE("denoising lifts psnr on a noisy textured image") {
  GrayImage clean = textured(96, 96);
  Rng rng(13);
  const double variance = 0.0025;
  GrayImage noisy = dmsp::add_gaussian_noise(clean, variance, rng);
  double before = dmsp::psnr(clean, noisy);

  dmsp::DenoiseConfig cfg;
  cfg.iterations = 6;
  cfg.t_c = 1;
  cfg.nodes = 6;
  cfg.seed = 5;
  dmsp::DenoiseResult res = dmsp::denoise(noisy, std::sqrt(variance), cfg);
  double after = dmsp::psnr(clean, res.output);
  CHECK(after >= before + 2.0);
  CHECK(res.thresholded_coeffs > 0);
  CHECK(dmsp::is_orthogonal(res.dictionary_t, 1e-8));
  CHECK(res.output.values.minCoeff() >= 0.0);
  CHECK(res.output.values.maxCoeff() <= 1.0);

  // the sparse-training path still denoises
  dmsp::DenoiseConfig fast = cfg;
  fast.fast = true;
  dmsp::DenoiseResult quick = dmsp::denoise(noisy, std::sqrt(variance), fast);
  CHECK(dmsp::psnr(clean, quick.output) >= before + 1.0);

  // determinism: same config and input, same output
  dmsp::DenoiseResult res2 = dmsp::denoise(noisy, std::sqrt(variance), cfg);
  CHECK((res2.output.values - res.output.values).norm() == 0.0);
  CHECK(res2.thresholded_coeffs == res.thresholded_coeffs);
}
