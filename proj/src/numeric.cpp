#include "pvar/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace pvar {

Limits Limits::from_env() {
  Limits limits;
  if (const char* env = std::getenv("PVAR_MAX_INTERVALS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw InvalidArgument("PVAR_MAX_INTERVALS must be a positive integer");
    }
    limits.max_intervals = v;
  }
  return limits;
}

std::uint64_t int_pow(int q, int n) {
  return checked_pow(q, n, std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t checked_pow(int q, int n, std::uint64_t cap) {
  if (q < 1 || n < 0) {
    throw InvalidArgument("checked_pow: need q >= 1 and n >= 0");
  }
  std::uint64_t result = 1;
  const auto base = static_cast<std::uint64_t>(q);
  for (int i = 0; i < n; ++i) {
    if (result > cap / base) {
      throw BudgetExceeded(std::to_string(q) + "^" + std::to_string(n) +
                           " exceeds the budget of " + std::to_string(cap));
    }
    result *= base;
  }
  if (result > cap) {
    throw BudgetExceeded(std::to_string(q) + "^" + std::to_string(n) +
                         " exceeds the budget of " + std::to_string(cap));
  }
  return result;
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) {
    const double a2 = a * a;
    return a2 * a2;
  }
  return std::pow(a, p);
}

std::vector<double> blocked_prefix_sums(std::span<const double> terms,
                                        std::span<const std::size_t> cuts) {
  std::vector<double> out(cuts.size());
  std::size_t prev = 0;
  double acc = 0.0;
  for (std::size_t r = 0; r < cuts.size(); ++r) {
    const std::size_t cut = cuts[r];
    if (cut < prev || cut > terms.size()) {
      throw InvalidArgument("blocked_prefix_sums: cuts must be sorted and in range");
    }
    acc += pairwise_sum(terms.subspan(prev, cut - prev));
    out[r] = acc;
    prev = cut;
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    unsigned char buf[sizeof(double)];
    std::memcpy(buf, &v, sizeof(double));
    for (unsigned char c : buf) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
    h >>= 4;
  }
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace pvar
