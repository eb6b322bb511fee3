#include "rbq/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace rbq {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xd1b54a32d192ed03ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

Vec2 Rng::gaussian_vec() {
  const double a = normal(), b = normal(), c = normal(), d = normal();
  return Vec2(Complex(a, b), Complex(c, d));
}

Vec2 Rng::sphere() {
  for (;;) {
    Vec2 v = gaussian_vec();
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Vec2 Rng::ball() {
  // radius density proportional to r^3 in real dimension four
  return std::pow(uniform(), 0.25) * sphere();
}

unsigned worker_count() {
  if (const char* env = std::getenv("RBQ_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace rbq
