#include "srkit/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace srkit {

double psnr(const ImageF32& a, const ImageF32& b, double peak) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: shape mismatch");
  if (peak <= 0.0) throw std::invalid_argument("psnr: peak must be positive");
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - double(b.data[i]);
    se += d * d;
  }
  const double mse = se / double(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    w[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Separable valid-region Gaussian blur: (h, w) -> (h-10, w-10).
std::vector<double> blur_valid(const std::vector<double>& in, int h, int w,
                               const std::array<double, kWindow>& g) {
  const int vw = w - kWindow + 1;
  const int vh = h - kWindow + 1;
  std::vector<double> tmp(std::size_t(h) * vw);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < vw; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k)
        acc += g[k] * in[std::size_t(y) * w + x + k];
      tmp[std::size_t(y) * vw + x] = acc;
    }
  std::vector<double> out(std::size_t(vh) * vw);
  for (int y = 0; y < vh; ++y)
    for (int x = 0; x < vw; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k)
        acc += g[k] * tmp[std::size_t(y + k) * vw + x];
      out[std::size_t(y) * vw + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const ImageF32& a, const ImageF32& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
  if (a.channels != 1)
    throw std::invalid_argument("ssim: expects single-channel images");
  if (a.height < kWindow || a.width < kWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  const int h = a.height, w = a.width;
  const std::size_t n = a.plane_size();
  std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double va = double(a.data[i]);
    const double vb = double(b.data[i]);
    pa[i] = va;
    pb[i] = vb;
    paa[i] = va * va;
    pbb[i] = vb * vb;
    pab[i] = va * vb;
  }

  static const std::array<double, kWindow> g = gaussian_window();
  const std::vector<double> mu1 = blur_valid(pa, h, w, g);
  const std::vector<double> mu2 = blur_valid(pb, h, w, g);
  const std::vector<double> m11 = blur_valid(paa, h, w, g);
  const std::vector<double> m22 = blur_valid(pbb, h, w, g);
  const std::vector<double> m12 = blur_valid(pab, h, w, g);

  double acc = 0.0;
  for (std::size_t i = 0; i < mu1.size(); ++i) {
    const double mu1_sq = mu1[i] * mu1[i];
    const double mu2_sq = mu2[i] * mu2[i];
    const double mu12 = mu1[i] * mu2[i];
    const double s1 = m11[i] - mu1_sq;
    const double s2 = m22[i] - mu2_sq;
    const double s12 = m12[i] - mu12;
    acc += ((2.0 * mu12 + kC1) * (2.0 * s12 + kC2)) /
           ((mu1_sq + mu2_sq + kC1) * (s1 + s2 + kC2));
  }
  return acc / double(mu1.size());
}

MetricReport benchmark_pair(const ImageF32& hr, const ImageF32& sr, int scale) {
  if (!hr.same_shape(sr))
    throw std::invalid_argument("benchmark_pair: shape mismatch");
  ImageF32 ya = hr.channels == 3 ? rgb_to_luma(hr) : hr;
  ImageF32 yb = sr.channels == 3 ? rgb_to_luma(sr) : sr;
  if (scale > 0) {
    ya = shave_border(ya, scale);
    yb = shave_border(yb, scale);
  }
  MetricReport rep;
  rep.scale = scale;
  rep.psnr_db = psnr(ya, yb, 1.0);
  rep.ssim = ssim(ya, yb);
  return rep;
}

void write_metric_csv(std::ostream& out, std::span<const MetricReport> rows) {
  out << "dataset,image_id,scale,psnr_db,ssim\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.dataset << "," << r.image_id << "," << r.scale << ",";
    if (std::isinf(r.psnr_db)) {
      out << "inf";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", r.psnr_db);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", r.ssim);
    out << "," << buf << "\n";
  }
}

std::vector<MetricReport> read_metric_csv(std::istream& in) {
  std::vector<MetricReport> rows;
  std::string line;
  if (!std::getline(in, line) || line != "dataset,image_id,scale,psnr_db,ssim")
    throw std::runtime_error("metric CSV: bad or missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    MetricReport r;
    std::string field;
    if (!std::getline(ss, r.dataset, ',')) break;
    if (!std::getline(ss, r.image_id, ','))
      throw std::runtime_error("metric CSV: truncated row");
    if (!std::getline(ss, field, ','))
      throw std::runtime_error("metric CSV: truncated row");
    r.scale = std::stoi(field);
    if (!std::getline(ss, field, ','))
      throw std::runtime_error("metric CSV: truncated row");
    r.psnr_db = field == "inf" ? std::numeric_limits<double>::infinity()
                               : std::stod(field);
    if (!std::getline(ss, field))
      throw std::runtime_error("metric CSV: truncated row");
    r.ssim = std::stod(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace srkit
