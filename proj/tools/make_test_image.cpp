#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dmsp/image.hpp"

// Deterministic 512x512 synthetic scene for the denoising tests: smooth
// gradients, hard-edged shapes, and oriented sinusoidal textures, all inside
// [0.1, 0.9] so added noise rarely clips.
int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "test_image_512.pgm";
  const int n = 512;
  const double pi = 3.14159265358979323846;

  dmsp::GrayImage img = dmsp::GrayImage::constant(n, n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double x = c / static_cast<double>(n - 1);
      double y = r / static_cast<double>(n - 1);
      double v = 0.30 + 0.30 * x + 0.12 * y;

      double dx = x - 0.32, dy = y - 0.30;
      if (dx * dx + dy * dy < 0.030) v = 0.78;            // bright disc
      if (x > 0.58 && x < 0.88 && y > 0.12 && y < 0.38)   // dark block
        v = 0.18;
      if (y > 0.55 && y < 0.75)                           // diagonal stripes
        v += 0.10 * std::sin(2.0 * pi * (c + 0.6 * r) / 13.0);
      if (y >= 0.78 && x > 0.08 && x < 0.92)              // checker texture
        v += 0.08 * std::sin(2.0 * pi * c / 9.0) * std::sin(2.0 * pi * r / 9.0);
      double ddx = x - 0.72, ddy = y - 0.62;
      double rad = std::sqrt(ddx * ddx + ddy * ddy);
      if (rad < 0.14) v = 0.55 + 0.15 * std::cos(2.0 * pi * rad / 0.05);

      img.values(r, c) = std::clamp(v, 0.1, 0.9);
    }

  dmsp::write_pgm(path, img);
  std::printf("wrote %s\n", path);
  return 0;
}
