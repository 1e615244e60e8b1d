#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glmamp/cgamp.hpp"

namespace glmamp {

// Planar image, values in [0,1]; 1 channel (PGM) or 3 channels (PPM).
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::vector<double>> channels;  // each of size width*height, row-major
};

// NetPBM readers/writers: P2/P5 (gray) and P3/P6 (color), maxval <= 255
Image read_image(const std::string& path);
void write_image(const std::string& path, const Image& image);

struct ImageExperimentResult {
  std::vector<double> spectral_overlaps;  // per channel, phase-aligned squared correlation
  std::vector<double> gamp_overlaps;
  double mean_spectral = 0.0;
  double mean_gamp = 0.0;
  Image reconstructed;
};

// Per channel: normalize to ||x||^2 = d, sense with L coded diffraction
// patterns at sampling ratio delta, run the spectral initializer and the
// complex iteration, and report phase-aligned overlaps.
ImageExperimentResult image_experiment(const Image& image, int L, double delta, const ComplexGampConfig& config,
                                       std::uint64_t seed);

}  // namespace glmamp
