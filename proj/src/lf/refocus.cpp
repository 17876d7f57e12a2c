#include "fds/lf/refocus.hpp"

#include <algorithm>
#include <string>

#include "fds/core/error.hpp"

namespace fds::lf {

namespace {

std::vector<Image> luma_views(const LightField& lf) {
  const auto& d = lf.dims();
  std::vector<Image> views;
  views.reserve(static_cast<std::size_t>(d.nu) * d.nv);
  for (int u = 0; u < d.nu; ++u)
    for (int v = 0; v < d.nv; ++v) views.push_back(subaperture_view(lf, u, v));
  return views;
}

Image refocus_views(const std::vector<Image>& views, const LfDims& d, float alpha) {
  const int u0 = d.nu / 2, v0 = d.nv / 2;
  std::vector<double> acc(static_cast<std::size_t>(d.ns) * d.nt, 0.0);
  for (int u = 0; u < d.nu; ++u) {
    for (int v = 0; v < d.nv; ++v) {
      const Image& view = views[static_cast<std::size_t>(u) * d.nv + v];
      const float dy = alpha * static_cast<float>(u - u0);
      const float dx = alpha * static_cast<float>(v - v0);
      for (int s = 0; s < d.ns; ++s) {
        double* row = acc.data() + static_cast<std::size_t>(s) * d.nt;
        for (int t = 0; t < d.nt; ++t) {
          row[t] += view.bilinear(static_cast<float>(s) + dy, static_cast<float>(t) + dx);
        }
      }
    }
  }
  const double n = static_cast<double>(d.nu) * d.nv;
  Image out(d.ns, d.nt);
  for (std::size_t i = 0; i < acc.size(); ++i) out.px[i] = static_cast<float>(acc[i] / n);
  return out;
}

void check_alphas(std::span<const float> alphas) {
  if (alphas.size() < 2) raise(Errc::InvalidArgument, "need at least two focus slopes");
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) raise(Errc::InvalidArgument, "focus slopes must be strictly increasing");
  }
}

}  // namespace

Image refocus(const LightField& lf, float alpha) {
  return refocus_views(luma_views(lf), lf.dims(), alpha);
}

RefocusStack refocus_stack(const LightField& lf, std::span<const float> alphas) {
  check_alphas(alphas);
  const auto views = luma_views(lf);
  RefocusStack stack;
  stack.alphas.assign(alphas.begin(), alphas.end());
  for (float a : alphas) stack.slices.push_back(refocus_views(views, lf.dims(), a));
  return stack;
}

Image focus_measure(const Image& image, int window) {
  if (window < 3 || window % 2 == 0) raise(Errc::InvalidArgument, "window must be odd and >= 3");
  if (window > image.h || window > image.w) {
    raise(Errc::WindowTooLarge, "window " + std::to_string(window) + " exceeds image dims");
  }
  Image lap(image.h, image.w);
  for (int y = 0; y < image.h; ++y) {
    for (int x = 0; x < image.w; ++x) {
      lap.at(y, x) = image.clamped(y - 1, x) + image.clamped(y + 1, x) + image.clamped(y, x - 1) +
                     image.clamped(y, x + 1) - 4.0f * image.at(y, x);
    }
  }
  const int r = window / 2;
  Image out(image.h, image.w);
  for (int y = 0; y < image.h; ++y) {
    for (int x = 0; x < image.w; ++x) {
      const int y0 = std::max(0, y - r), y1 = std::min(image.h - 1, y + r);
      const int x0 = std::max(0, x - r), x1 = std::min(image.w - 1, x + r);
      double sum = 0.0;
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) sum += lap.at(yy, xx);
      const double n = static_cast<double>((y1 - y0 + 1) * (x1 - x0 + 1));
      const double m = sum / n;
      double ss = 0.0;
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) {
          const double dv = lap.at(yy, xx) - m;
          ss += dv * dv;
        }
      out.at(y, x) = static_cast<float>(ss / n);
    }
  }
  return out;
}

DepthMap depth_from_focus(const LightField& lf, std::span<const float> alphas, int window) {
  check_alphas(alphas);
  const auto& d = lf.dims();
  const auto views = luma_views(lf);
  Image best_score(d.ns, d.nt, -1.0f);
  std::vector<std::size_t> best(static_cast<std::size_t>(d.ns) * d.nt, 0);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const Image sharp = focus_measure(refocus_views(views, d, alphas[k]), window);
    for (std::size_t i = 0; i < sharp.px.size(); ++i) {
      if (sharp.px[i] > best_score.px[i]) {
        best_score.px[i] = sharp.px[i];
        best[i] = k;
      }
    }
  }
  const float lo = alphas.front(), span = alphas.back() - alphas.front();
  Image depth(d.ns, d.nt);
  for (std::size_t i = 0; i < best.size(); ++i) {
    depth.px[i] = std::clamp((alphas[best[i]] - lo) / span, 0.0f, 1.0f);
  }
  return DepthMap(std::move(depth));
}

std::vector<float> linspace(float lo, float hi, int count) {
  if (count < 2) raise(Errc::InvalidArgument, "linspace needs at least two points");
  std::vector<float> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<float>(i) / static_cast<float>(count - 1);
  }
  return out;
}

}  // namespace fds::lf
