#pragma once

// Seeded quasi-random sample points: a Halton sequence in bases 2, 3, 5, 7
// with a random shift modulo 1 drawn from the seed.

#include <cstdint>
#include <vector>

#include "hetcalc/profiles.hpp"

namespace het {

/// Radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, unsigned base);

/// `count` points of the profile's sample box whose margin is at least
/// `min_margin`. Throws BadParams when the box yields too few admissible points.
std::vector<Point> sample_points(const DilatonProfile& profile, int count, std::uint64_t seed,
                                 double min_margin = 1e-3);

/// Rounds a point to dyadic rationals with denominator 2^bits.
RationalPoint to_rational_point(const Point& x, int bits = 12);

}  // namespace het
