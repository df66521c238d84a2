#include "hetcalc/sampling.hpp"

#include <cmath>
#include <random>

#include "hetcalc/errors.hpp"

namespace het {

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<Point> sample_points(const DilatonProfile& profile, int count, std::uint64_t seed, double min_margin) {
  static constexpr unsigned kBases[4] = {2, 3, 5, 7};
  std::mt19937_64 rng(seed);
  // 53 high bits of the engine output, so the shift is the same on every platform.
  std::array<double, 4> shift;
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  const auto [lo, hi] = profile.sample_box();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  const std::uint64_t limit = 64 * static_cast<std::uint64_t>(count) + 1024;
  for (std::uint64_t i = 1; static_cast<int>(out.size()) < count; ++i) {
    if (i > limit) throw BadParams("sample box of profile '" + profile.name() + "' has too few admissible points");
    Point x;
    for (int k = 0; k < 4; ++k) {
      double u = radical_inverse(i, kBases[k]) + shift[static_cast<std::size_t>(k)];
      u -= std::floor(u);
      x[static_cast<std::size_t>(k)] = lo + (hi - lo) * u;
    }
    if (profile.margin(x) >= min_margin) out.push_back(x);
  }
  return out;
}

RationalPoint to_rational_point(const Point& x, int bits) {
  const double scale = std::ldexp(1.0, bits);
  RationalPoint r;
  for (int k = 0; k < 4; ++k) {
    mpz_class num(static_cast<long>(std::llround(x[static_cast<std::size_t>(k)] * scale)));
    mpz_class den(1);
    den <<= static_cast<unsigned>(bits);
    r[static_cast<std::size_t>(k)] = Rational(num, den);
    r[static_cast<std::size_t>(k)].canonicalize();
  }
  return r;
}

}  // namespace het
