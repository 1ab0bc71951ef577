#include "support.hpp"

#include <algorithm>
#include <numeric>

namespace ppir::test {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::size_t> random_subset(Rng& rng, std::size_t mu, std::size_t k) {
  std::vector<std::size_t> all(mu);
  std::iota(all.begin(), all.end(), std::size_t{1});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

struct Draft {
  std::size_t gamma, eta, users;
  std::vector<std::size_t> mu;
  std::vector<std::vector<std::size_t>> k;  // [u][i]
};

Draft draft_single(Rng& rng) {
  Draft d;
  d.users = 1;
  d.gamma = uniform(rng, 2, 6);
  d.eta = uniform(rng, 1, d.gamma);
  const std::size_t k_un = d.eta == d.gamma ? 0 : uniform(rng, 0, 3);
  const std::size_t margin = ceil_div(k_un + 1, d.eta);
  d.k.assign(1, std::vector<std::size_t>(d.gamma));
  for (std::size_t i = 0; i < d.gamma; ++i) {
    std::size_t& k = d.k[0][i];
    if (i < d.eta) {
      k = uniform(rng, k_un + 1, k_un + 3);
      d.mu.push_back(k + uniform(rng, margin, margin + 3));
    } else {
      k = i == d.eta ? k_un : uniform(rng, 0, k_un);
      d.mu.push_back(std::max(k + margin, k_un + 1) + uniform(rng, 0, 2));
    }
  }
  return d;
}

Draft draft_multi(Rng& rng) {
  Draft d;
  d.users = uniform(rng, 2, 3);
  d.eta = 1 + d.users * uniform(rng, 1, 2);
  d.gamma = d.eta + uniform(rng, 1, 2);
  const std::size_t k_un = uniform(rng, d.users - 1, d.users + 1);
  d.k.assign(d.users, std::vector<std::size_t>(d.gamma));
  d.mu.assign(d.gamma, 0);
  for (std::size_t u = 0; u < d.users; ++u)
    for (std::size_t i = 0; i < d.gamma; ++i)
      d.k[u][i] = i < d.eta ? uniform(rng, k_un + 1, k_un + 2) : (u == 0 && i == d.eta ? k_un : uniform(rng, 0, k_un));
  for (std::size_t i = 0; i < d.gamma; ++i) {
    std::size_t top = 0;
    for (std::size_t u = 0; u < d.users; ++u) top = std::max(top, d.k[u][i]);
    d.mu[i] = top + k_un + 1 + uniform(rng, 0, 2);
  }
  return d;
}

}  // namespace

std::uint32_t next_prime(std::uint32_t n) {
  while (!is_prime(n)) ++n;
  return n;
}

Scenario make_scenario(std::uint32_t q, std::size_t length, const std::vector<std::size_t>& sizes, std::size_t eta,
                       const std::vector<std::vector<std::vector<std::size_t>>>& side, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> classes;
  std::size_t f = 0;
  for (std::size_t mu : sizes) {
    classes.emplace_back();
    for (std::size_t b = 0; b < mu; ++b) classes.back().push_back(++f);
  }
  std::vector<std::vector<Symbol>> messages(f, std::vector<Symbol>(length));
  for (std::size_t g = 1; g <= f; ++g)
    for (std::size_t l = 0; l < length; ++l) messages[g - 1][l] = random_symbol(seed, g, l, q);
  const PrimeField field(q);
  return Scenario(MessageStore(field, length, messages), ClassMap(classes, f), eta, side, seed);
}

Scenario random_conforming(Mode mode, Rng& rng) {
  while (true) {
    const Draft d = mode == Mode::single ? draft_single(rng) : draft_multi(rng);
    std::vector<std::vector<std::vector<std::size_t>>> side(d.users);
    for (std::size_t u = 0; u < d.users; ++u)
      for (std::size_t i = 0; i < d.gamma; ++i) side[u].push_back(random_subset(rng, d.mu[i], d.k[u][i]));
    const std::size_t disclosed = mode == Mode::single ? d.eta - 1 : ceil_div(d.eta - 1, d.users);
    const std::uint32_t q = next_prime(static_cast<std::uint32_t>(2 * d.gamma - disclosed + uniform(rng, 0, 6)));
    Scenario s = make_scenario(q, uniform(rng, 1, 3), d.mu, d.eta, side, rng());
    const ValidationReport report = validate_scenario(s, mode);
    if (report.ok() && report.hypotheses_hold()) return s;
  }
}

}  // namespace ppir::test
