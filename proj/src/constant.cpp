#include "pvar/constant.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "pvar/schauder.hpp"

namespace pvar {

std::string to_string(ConstantMethod m) {
  switch (m) {
    case ConstantMethod::Exact: return "exact";
    case ConstantMethod::MonteCarlo: return "mc";
    case ConstantMethod::Closed: return "closed";
  }
  return "unknown";
}

ConstantMethod constant_method_from_string(const std::string& s) {
  if (s == "exact") return ConstantMethod::Exact;
  if (s == "mc" || s == "monte-carlo") return ConstantMethod::MonteCarlo;
  if (s == "closed" || s == "closed-form") return ConstantMethod::Closed;
  throw InvalidArgument("unknown constant method '" + s + "' (expected exact, mc or closed)");
}

namespace {

struct Series {
  int q;
  double p;
  double rho;
  std::vector<double> eta;
  double eta_max = 0.0;
  double eta_sq_mean = 0.0;
};

Series make_series(double p, int q, std::span<const double> a) {
  if (!(p > 1.0)) throw InvalidArgument("variation constant needs p > 1");
  if (q < 2) throw InvalidArgument("q must be >= 2");
  std::vector<double> weights(a.begin(), a.end());
  if (weights.empty()) weights.assign(static_cast<std::size_t>(q - 1), 1.0);
  if (std::all_of(weights.begin(), weights.end(), [](double v) { return v == 0.0; })) {
    throw InvalidArgument("branch weights a must not vanish");
  }
  Series s{q, p, std::pow(static_cast<double>(q), -(1.0 - 1.0 / p)), eta_table(weights, q)};
  for (double e : s.eta) {
    s.eta_max = std::max(s.eta_max, std::fabs(e));
    s.eta_sq_mean += e * e;
  }
  s.eta_sq_mean /= q;
  return s;
}

double tail_bound(const Series& s, int J) {
  const double rho = s.rho;
  const double bound_z = s.eta_max * rho / (1.0 - rho);
  if (s.p >= 2.0) {
    // Second-order Taylor bound; the first-order term averages out because
    // the tail is mean zero and independent of the head.
    const double tail_sq = std::pow(rho, 2.0 * (J + 1)) / (1.0 - rho * rho) * s.eta_sq_mean;
    return 0.5 * s.p * (s.p - 1.0) * std::pow(bound_z, s.p - 2.0) * tail_sq;
  }
  const double lip = s.p * std::pow(2.0 * bound_z, s.p - 1.0);
  return lip * s.eta_max * std::pow(rho, J + 1) / (1.0 - rho);
}

int pick_truncation(const Series& s, double target) {
  if (!(target > 0.0)) throw InvalidArgument("target tail must be positive");
  for (int J = 1; J <= 4096; ++J) {
    if (tail_bound(s, J) < target) return J;
  }
  throw BudgetExceeded("no truncation depth up to 4096 reaches the requested tail bound");
}

unsigned thread_count(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Mean of |s + sum_{j >= depth} terms[j][d_j]|^p over all digit strings.
double subtree_mean(const std::vector<std::vector<double>>& terms, std::size_t depth, double s, double p,
                    double inv_q) {
  const auto& row = terms[depth];
  double acc = 0.0;
  if (depth + 1 == terms.size()) {
    for (double t : row) acc += abs_pow(s + t, p);
  } else {
    for (double t : row) acc += subtree_mean(terms, depth + 1, s + t, p, inv_q);
  }
  return acc * inv_q;
}

VariationConstant exact(const Series& s, const ConstantOptions& opt) {
  const int J = opt.J > 0 ? opt.J : pick_truncation(s, opt.target_tail);
  checked_pow(s.q, J, opt.max_work);
  std::vector<std::vector<double>> terms(static_cast<std::size_t>(J));
  for (int j = 1; j <= J; ++j) {
    const double w = std::pow(s.rho, j);
    for (double e : s.eta) terms[static_cast<std::size_t>(j - 1)].push_back(w * e);
  }
  const unsigned threads = thread_count(opt.threads);
  int top = 0;
  while (top < J - 1 && int_pow(s.q, top) < 4ull * threads) ++top;
  const std::uint64_t blocks = int_pow(s.q, top);
  const auto qu = static_cast<std::uint64_t>(s.q);
  const double inv_q = 1.0 / s.q;
  std::vector<double> block_mean(blocks);
  // Block b fixes d_1..d_top with d_1 most significant, so q consecutive
  // blocks share a parent and the final reduction mirrors the recursion.
  parallel_for(blocks, threads, [&](std::size_t b) {
    double head = 0.0;
    std::uint64_t rest = b;
    std::vector<int> d(static_cast<std::size_t>(top));
    for (int j = top - 1; j >= 0; --j) {
      d[static_cast<std::size_t>(j)] = static_cast<int>(rest % qu);
      rest /= qu;
    }
    for (int j = 0; j < top; ++j) head += terms[static_cast<std::size_t>(j)][static_cast<std::size_t>(d[static_cast<std::size_t>(j)])];
    block_mean[b] = subtree_mean(terms, static_cast<std::size_t>(top), head, s.p, inv_q);
  });
  while (block_mean.size() > 1) {
    std::vector<double> next(block_mean.size() / qu);
    for (std::size_t i = 0; i < next.size(); ++i) {
      double acc = 0.0;
      for (std::uint64_t d = 0; d < qu; ++d) acc += block_mean[i * qu + d];
      next[i] = acc * inv_q;
    }
    block_mean = std::move(next);
  }
  VariationConstant c;
  c.value = block_mean.front();
  c.method = ConstantMethod::Exact;
  c.J = J;
  c.tail_bound = tail_bound(s, J);
  c.error_bound = c.tail_bound;
  return c;
}

VariationConstant monte_carlo(const Series& s, const ConstantOptions& opt) {
  if (opt.samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
  if (opt.samples > opt.max_work) {
    throw BudgetExceeded("Monte Carlo sample count " + std::to_string(opt.samples) + " exceeds the budget of " +
                         std::to_string(opt.max_work));
  }
  const int J = opt.J > 0 ? opt.J : pick_truncation(s, 1e-9);
  int K = std::clamp(opt.strata_depth, 0, J);
  while (K > 0 && int_pow(s.q, K) * 2 > opt.samples) --K;
  const std::uint64_t strata = int_pow(s.q, K);
  const auto qu = static_cast<std::uint64_t>(s.q);
  std::vector<double> weight(static_cast<std::size_t>(J));
  for (int j = 1; j <= J; ++j) weight[static_cast<std::size_t>(j - 1)] = std::pow(s.rho, j);

  std::vector<double> mean(strata);
  std::vector<double> var_of_mean(strata);
  const std::uint64_t base_n = opt.samples / strata;
  const std::uint64_t extra = opt.samples % strata;
  const std::uint64_t root = splitmix64(opt.seed);
  parallel_for(strata, thread_count(opt.threads), [&](std::size_t st) {
    double head = 0.0;
    std::uint64_t rest = st;
    for (int j = 0; j < K; ++j) {
      head += weight[static_cast<std::size_t>(j)] * s.eta[rest % qu];
      rest /= qu;
    }
    const std::uint64_t n = base_n + (st < extra ? 1 : 0);
    std::mt19937_64 rng(splitmix64(root + st));
    std::uniform_int_distribution<int> digit(0, s.q - 1);
    double mu = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      double z = head;
      for (int j = K; j < J; ++j) z += weight[static_cast<std::size_t>(j)] * s.eta[static_cast<std::size_t>(digit(rng))];
      const double v = abs_pow(z, s.p);
      const double delta = v - mu;
      mu += delta / static_cast<double>(i + 1);
      m2 += delta * (v - mu);
    }
    mean[st] = mu;
    var_of_mean[st] = m2 / static_cast<double>(n - 1) / static_cast<double>(n);
  });
  const double inv = 1.0 / static_cast<double>(strata);
  VariationConstant c;
  c.value = pairwise_sum(mean) * inv;
  c.std_error = std::sqrt(pairwise_sum(var_of_mean)) * inv;
  c.method = ConstantMethod::MonteCarlo;
  c.J = J;
  c.samples = opt.samples;
  c.seed = opt.seed;
  c.tail_bound = tail_bound(s, J);
  c.error_bound = c.tail_bound + 3.0 * c.std_error;
  return c;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

VariationConstant closed_form(const Series& s) {
  const double pr = std::round(s.p);
  if (s.p != pr || static_cast<int>(pr) % 2 != 0 || pr > 64) {
    throw InvalidArgument("closed form needs an even integer p <= 64");
  }
  const int P = static_cast<int>(pr);
  const auto idx = [](int i) { return static_cast<std::size_t>(i); };
  // Moments and cumulants of one digit term X = eta_D.
  std::vector<double> mx(idx(P + 1), 0.0);
  for (int r = 0; r <= P; ++r) {
    for (double e : s.eta) mx[idx(r)] += std::pow(e, r);
    mx[idx(r)] /= s.q;
  }
  std::vector<double> kx(idx(P + 1), 0.0);
  for (int n = 1; n <= P; ++n) {
    double v = mx[idx(n)];
    for (int k = 1; k < n; ++k) v -= binomial(n - 1, k - 1) * kx[idx(k)] * mx[idx(n - k)];
    kx[idx(n)] = v;
  }
  // Z = sum_j rho^j X_j: cumulants scale by sum_j rho^(r j).
  std::vector<double> kz(idx(P + 1), 0.0);
  for (int r = 1; r <= P; ++r) {
    const double rr = std::pow(s.rho, r);
    kz[idx(r)] = kx[idx(r)] * rr / (1.0 - rr);
  }
  std::vector<double> mz(idx(P + 1), 0.0);
  std::vector<double> mabs(idx(P + 1), 0.0);
  mz[0] = mabs[0] = 1.0;
  for (int n = 1; n <= P; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double b = binomial(n - 1, k - 1);
      mz[idx(n)] += b * kz[idx(k)] * mz[idx(n - k)];
      mabs[idx(n)] += b * std::fabs(kz[idx(k)]) * mabs[idx(n - k)];
    }
  }
  VariationConstant c;
  c.value = mz[idx(P)];
  c.method = ConstantMethod::Closed;
  c.error_bound = 4.0 * P * P * DBL_EPSILON * mabs[idx(P)];
  return c;
}

}  // namespace

double truncation_bound(double p, int q, std::span<const double> a, int J) {
  if (J < 0) throw InvalidArgument("truncation depth must be >= 0");
  return tail_bound(make_series(p, q, a), J);
}

int truncation_for(double p, int q, std::span<const double> a, double target) {
  return pick_truncation(make_series(p, q, a), target);
}

VariationConstant variation_constant(double p, int q, std::span<const double> a, ConstantMethod method,
                                     const ConstantOptions& options) {
  const Series s = make_series(p, q, a);
  switch (method) {
    case ConstantMethod::Exact: return exact(s, options);
    case ConstantMethod::MonteCarlo: return monte_carlo(s, options);
    case ConstantMethod::Closed: return closed_form(s);
  }
  throw InvalidArgument("unknown constant method");
}

}  // namespace pvar
