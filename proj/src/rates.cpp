#include "ppir/audit.hpp"
#include "ppir/error.hpp"

#include <algorithm>

namespace ppir {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

Rational reciprocal(std::size_t d) { return Rational(1, d); }

std::string class_list(const std::vector<std::size_t>& classes) {
  std::string s;
  for (std::size_t c : classes) s += (s.empty() ? "" : ",") + std::to_string(c);
  return "{" + s + "}";
}

// Classes of user 1 breaking k_i > k_un (identifiable) or
// mu_i - k_i >= ceil((k_un+1)/eta).
std::vector<std::size_t> base_violations(const RateParams& p) {
  std::vector<std::size_t> bad;
  const std::size_t k_un = p.k_un_of(1);
  const auto& k = p.k.at(0);
  for (std::size_t i = 1; i <= p.gamma; ++i) {
    const bool identifiable_ok = i > p.eta || k[i - 1] > k_un;
    const bool margin_ok = p.eta > 0 && p.mu[i - 1] >= k[i - 1] + ceil_div(k_un + 1, p.eta);
    if (!identifiable_ok || !margin_ok) bad.push_back(i);
  }
  return bad;
}

TheoremFlag verdict(std::vector<std::size_t> bad, const std::vector<std::size_t>& base, std::string what) {
  TheoremFlag f;
  for (std::size_t c : base)
    if (std::find(bad.begin(), bad.end(), c) == bad.end()) bad.push_back(c);
  std::sort(bad.begin(), bad.end());
  f.witnesses = std::move(bad);
  f.verdict = f.witnesses.empty() ? Verdict::holds : Verdict::fails;
  f.detail = f.witnesses.empty() ? what : what + " fails at classes " + class_list(f.witnesses);
  return f;
}

}  // namespace

RateParams RateParams::from(const Scenario& s) {
  RateParams p;
  p.gamma = s.class_count();
  p.eta = s.eta();
  p.mu = s.classes().sizes();
  for (std::size_t u = 1; u <= s.user_count(); ++u) p.k.push_back(s.user(u).counts());
  return p;
}

std::size_t RateParams::k_un_of(std::size_t u) const {
  const auto& ku = k.at(u - 1);
  std::size_t best = 0;
  for (std::size_t i = eta; i < gamma; ++i) best = std::max(best, ku[i]);
  return best;
}

std::size_t RateParams::k_un() const {
  std::size_t best = 0;
  for (std::size_t u = 1; u <= users(); ++u) best = std::max(best, k_un_of(u));
  return best;
}

std::size_t RateParams::eta_prime() const noexcept {
  if (eta == 0 || users() == 0) return 0;
  return ceil_div(eta - 1, users());
}

Rational rate_isi(const RateParams& p) { return reciprocal((p.k_un_of(1) + 1) * (p.gamma - p.eta + 1)); }

Rational rate_usi(const RateParams& p) {
  std::size_t sum = 0;
  const auto& k = p.k.at(0);
  for (std::size_t i = 0; i < p.gamma; ++i) sum += std::min(k[i] + 1, p.mu[i] - k[i]);
  return reciprocal(sum);
}

Rational rate_multi(const RateParams& p) { return reciprocal((p.k_un() + 1) * (p.gamma - p.eta_prime())); }

Rational rate_naive_multi(const RateParams& p) {
  return reciprocal(p.users() * (p.k_un() + 1) * (p.gamma - p.eta + 1));
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

bool ComparisonReport::any_holds() const noexcept {
  return t2.verdict == Verdict::holds || t3.verdict == Verdict::holds || t4.verdict == Verdict::holds;
}

ComparisonReport theorem_conditions(const RateParams& p) {
  ComparisonReport r;
  r.isi = rate_isi(p);
  r.usi = rate_usi(p);
  r.multi = rate_multi(p);
  r.naive_multi = rate_naive_multi(p);
  r.isi_over_usi = r.isi / r.usi;

  const auto& k = p.k.at(0);
  const std::size_t k_un = p.k_un_of(1);
  const std::vector<std::size_t> base = base_violations(p);
  r.base_hypotheses = base.empty();

  {
    std::vector<std::size_t> bad;
    for (std::size_t i = 1; i <= p.gamma; ++i) {
      const bool small_side = k[i - 1] + 1 <= p.mu[i - 1] - k[i - 1];
      const bool flat_unknown = i <= p.eta || k[i - 1] == k_un;
      if (!small_side || !flat_unknown) bad.push_back(i);
    }
    r.t2 = verdict(std::move(bad), base, "k_i+1 <= mu_i-k_i and k_i = k_un on unidentifiable classes");
  }

  {
    const auto uniform = [](auto first, auto last) { return first == last || std::all_of(first, last, [&](auto x) { return x == *first; }); };
    const bool shape = uniform(p.mu.begin(), p.mu.end()) && uniform(k.begin(), k.begin() + p.eta) &&
                       uniform(k.begin() + p.eta, k.end());
    if (!shape || p.eta == 0) {
      r.t3.verdict = Verdict::not_applicable;
      r.t3.detail = "needs uniform mu, uniform k on identifiable and on unidentifiable classes";
    } else {
      const std::size_t mu = p.mu[0];
      const std::size_t kid = k[0];
      std::vector<std::size_t> bad;
      for (std::size_t i = 1; i <= p.gamma; ++i)
        if (k[i - 1] + 1 < mu - k[i - 1]) bad.push_back(i);
      const std::size_t need = kid + ceil_div((p.gamma - p.eta + 1) * (k_un + 1), p.gamma);
      if (mu < need) bad.push_back(1);
      r.t3 = verdict(std::move(bad), base, "k_i+1 >= mu-k_i and mu >= k + ceil((Gamma-eta+1)(k_un+1)/Gamma)");
    }
  }

  {
    std::vector<std::size_t> bad;
    for (std::size_t i = 1; i <= p.gamma; ++i)
      if (k[i - 1] + 1 < p.mu[i - 1] - k[i - 1]) bad.push_back(i);
    if (p.eta != 1) {
      r.t4.verdict = Verdict::fails;
      r.t4.witnesses = std::move(bad);
      r.t4.detail = "needs exactly one identifiable class, eta=" + std::to_string(p.eta);
    } else {
      r.t4 = verdict(std::move(bad), base, "eta = 1 and k_i+1 >= mu_i-k_i");
    }
  }

  if (r.any_holds() && r.isi < r.usi)
    throw Error(Errc::AssumptionViolated, "a comparison theorem holds but R_isi " + to_fraction(r.isi) + " < R_usi " +
                                              to_fraction(r.usi));
  return r;
}

}  // namespace ppir
