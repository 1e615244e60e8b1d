#include "glmamp/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "glmamp/cdp.hpp"
#include "glmamp/spectral.hpp"

namespace glmamp {

namespace {

int next_token(std::istream& in) {
  // skips whitespace and '#' comments, returns a nonnegative integer
  while (true) {
    int c = in.peek();
    if (c == EOF) throw std::runtime_error("image: truncated header");
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("image: malformed header");
  return value;
}

}  // namespace

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("image: cannot open " + path);
  char p = 0, kind = 0;
  in.get(p);
  in.get(kind);
  if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6')) {
    throw std::runtime_error("image: unsupported format in " + path);
  }
  const bool color = (kind == '3' || kind == '6');
  const bool binary = (kind == '5' || kind == '6');
  const std::size_t w = static_cast<std::size_t>(next_token(in));
  const std::size_t h = static_cast<std::size_t>(next_token(in));
  const int maxval = next_token(in);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) throw std::runtime_error("image: unsupported geometry or depth");

  Image img;
  img.width = w;
  img.height = h;
  img.channels.assign(color ? 3 : 1, std::vector<double>(w * h));
  const std::size_t nc = img.channels.size();
  const double inv = 1.0 / static_cast<double>(maxval);
  if (binary) {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(w * h * nc);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw std::runtime_error("image: truncated pixel data");
    for (std::size_t i = 0; i < w * h; ++i) {
      for (std::size_t c = 0; c < nc; ++c) img.channels[c][i] = raw[i * nc + c] * inv;
    }
  } else {
    for (std::size_t i = 0; i < w * h; ++i) {
      for (std::size_t c = 0; c < nc; ++c) img.channels[c][i] = next_token(in) * inv;
    }
  }
  return img;
}

void write_image(const std::string& path, const Image& image) {
  const std::size_t nc = image.channels.size();
  if (nc != 1 && nc != 3) throw std::invalid_argument("image: only 1- or 3-channel images are writable");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("image: cannot write " + path);
  out << (nc == 3 ? "P6" : "P5") << "\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> raw(image.width * image.height * nc);
  for (std::size_t i = 0; i < image.width * image.height; ++i) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double v = std::min(1.0, std::max(0.0, image.channels[c][i]));
      raw[i * nc + c] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

ImageExperimentResult image_experiment(const Image& image, int L, double delta, const ComplexGampConfig& config,
                                       std::uint64_t seed) {
  const std::size_t d = image.width * image.height;
  if (d == 0 || image.channels.empty()) throw std::invalid_argument("image_experiment: empty image");

  Preprocessing preproc = optimal_T_bar_complex(delta);
  ZsLaw law = make_zs_law_complex(preproc);
  SpectralPrediction pred = solve_lambda_star(law, delta);

  ImageExperimentResult res;
  res.reconstructed = image;
  Rng root(seed);

  for (std::size_t c = 0; c < image.channels.size(); ++c) {
    Rng rng = root.fork(c);
    ComplexInstance inst;
    inst.d = d;
    double norm2 = 0.0;
    for (double v : image.channels[c]) norm2 += v * v;
    if (norm2 == 0.0) throw std::invalid_argument("image_experiment: all-zero channel");
    const double scale = std::sqrt(static_cast<double>(d) / norm2);
    inst.x.resize(d);
    for (std::size_t i = 0; i < d; ++i) inst.x[i] = {scale * image.channels[c][i], 0.0};

    auto op = std::make_shared<CdpOperator>(image.height, image.width, L, delta, rng);
    inst.op = op;
    inst.n = op->rows();
    inst.delta = static_cast<double>(inst.n) / static_cast<double>(d);
    std::vector<std::complex<double>> g = op->apply(inst.x);
    inst.y.resize(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) inst.y[i] = std::norm(g[i]);

    ComplexSpectralEstimate est = spectral_estimate_complex(*op, inst.y, preproc, rng);
    res.spectral_overlaps.push_back(phase_aligned_overlap(est.xs, inst.x));

    ComplexGampConfig cfg = config;
    cfg.online_mu = true;
    if (!pred.informative || pred.a2 <= 0.0) {
      // below-threshold fallback scale; the run is only diagnostic here
      if (cfg.mu0 < 0.0) cfg.mu0 = 0.01;
      if (cfg.x0_scale < 0.0) cfg.x0_scale = 0.1 * std::sqrt(static_cast<double>(d));
    }
    ComplexGampTrace trace = complex_gamp_run(inst, cfg, est.xs, pred.a2, pred.lambda_star, preproc);
    res.gamp_overlaps.push_back(trace.overlaps.back());

    // the iterate lives at mu times the signal scale; bring it back to the
    // normalized target norm, then phase-align to the signal for rendering
    double fn2 = 0.0;
    for (const auto& v : trace.final_x) fn2 += std::norm(v);
    const double renorm = fn2 > 0.0 ? std::sqrt(static_cast<double>(d) / fn2) : 0.0;
    std::complex<double> ip(0.0, 0.0);
    for (std::size_t i = 0; i < d; ++i) ip += std::conj(trace.final_x[i]) * inst.x[i];
    const std::complex<double> rot = std::abs(ip) > 0.0 ? ip / std::abs(ip) : std::complex<double>{1.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) {
      res.reconstructed.channels[c][i] = (trace.final_x[i] * rot).real() * renorm / scale;
    }
  }
  double ms = 0.0, mg = 0.0;
  for (std::size_t c = 0; c < res.spectral_overlaps.size(); ++c) {
    ms += res.spectral_overlaps[c];
    mg += res.gamp_overlaps[c];
  }
  res.mean_spectral = ms / static_cast<double>(res.spectral_overlaps.size());
  res.mean_gamp = mg / static_cast<double>(res.gamp_overlaps.size());
  return res;
}

}  // namespace glmamp
