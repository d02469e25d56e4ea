#include "eiha/information.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace eiha {
namespace {

// Entropy of the counts found at stride `step` starting at `first`; `total`
// is their sum.
double strided_entropy(const std::uint32_t* first, std::size_t n, std::size_t step,
                       std::uint32_t total) {
  double h = 0.0;
  const double inv = 1.0 / total;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t c = first[i * step];
    if (c == 0 || c == total) continue;
    const double p = c * inv;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double channel_entropy(std::span<const std::uint32_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("channel_entropy: empty histogram");
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::uint8_t> canonical_labels(std::span<const std::uint8_t> samples) {
  std::vector<std::uint8_t> out(samples.size());
  std::array<std::int16_t, 256> label;
  label.fill(-1);
  std::int16_t next = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& l = label[samples[i]];
    if (l < 0) l = next++;
    out[i] = static_cast<std::uint8_t>(l);
  }
  return out;
}

double channel_information_distance(std::span<const std::uint8_t> x,
                                    std::span<const std::uint8_t> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("channel_information_distance: length mismatch");
  if (x.empty()) throw std::invalid_argument("channel_information_distance: empty samples");

  const auto cx = canonical_labels(x);
  const auto cy = canonical_labels(y);
  std::size_t kx = 0, ky = 0;
  for (auto v : cx) kx = std::max<std::size_t>(kx, v + 1u);
  for (auto v : cy) ky = std::max<std::size_t>(ky, v + 1u);

  // joint[ix * ky + iy]
  std::vector<std::uint32_t> joint(kx * ky, 0);
  std::vector<std::uint32_t> nx(kx, 0), ny(ky, 0);
  for (std::size_t t = 0; t < cx.size(); ++t) {
    ++joint[cx[t] * ky + cy[t]];
    ++nx[cx[t]];
    ++ny[cy[t]];
  }
  const double n = static_cast<double>(cx.size());

  // H(X|Y) = sum_y p(y) H(X | Y=y), a column walk over the joint.
  double x_given_y = 0.0;
  for (std::size_t iy = 0; iy < ky; ++iy)
    x_given_y += (ny[iy] / n) * strided_entropy(&joint[iy], kx, ky, ny[iy]);

  // H(Y|X) = sum_x p(x) H(Y | X=x), a row walk.
  double y_given_x = 0.0;
  for (std::size_t ix = 0; ix < kx; ++ix)
    y_given_x += (nx[ix] / n) * strided_entropy(&joint[ix * ky], ky, 1, nx[ix]);

  return x_given_y + y_given_x;
}

}  // namespace eiha
