#include "ppir/scenario.hpp"

#include "ppir/error.hpp"

#include <algorithm>
#include <numeric>

namespace ppir {

namespace {

std::string idx(std::size_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
  return s;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return b == 0 ? 0 : (a + b - 1) / b; }

}  // namespace

// ---- MessageStore ----------------------------------------------------------

MessageStore::MessageStore(const PrimeField& field, std::size_t length,
                           const std::vector<std::vector<Symbol>>& messages)
    : field_(field), count_(messages.size()), length_(length) {
  if (count_ < 2) throw Error(Errc::BadDimensions, "need at least 2 messages, got " + idx(count_));
  if (length_ < 1) throw Error(Errc::BadDimensions, "messages need at least one symbol");
  data_.reserve(count_ * length_);
  for (std::size_t f = 0; f < count_; ++f) {
    if (messages[f].size() != length_)
      throw Error(Errc::LengthMismatch, "message " + idx(f + 1) + " has " + idx(messages[f].size()) +
                                            " symbols, expected " + idx(length_));
    for (Symbol s : messages[f]) {
      if (!field_.contains(s))
        throw Error(Errc::OutOfRange, "message " + idx(f + 1) + " symbol " + idx(s) + " not in GF(" +
                                          idx(field_.order()) + ")");
      data_.push_back(s);
    }
  }
}

std::span<const Symbol> MessageStore::message(std::size_t f) const {
  if (f < 1 || f > count_) throw Error(Errc::OutOfRange, "message index " + idx(f) + " not in [1," + idx(count_) + "]");
  return {data_.data() + (f - 1) * length_, length_};
}

// ---- ClassMap --------------------------------------------------------------

ClassMap::ClassMap(std::vector<std::vector<std::size_t>> classes, std::size_t message_count)
    : classes_(std::move(classes)), reverse_(message_count) {
  if (classes_.size() < 2) throw Error(Errc::BadDimensions, "need at least 2 classes, got " + idx(classes_.size()));
  std::size_t seen = 0;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].empty()) throw Error(Errc::BadDimensions, "class " + idx(i + 1) + " is empty");
    for (std::size_t b = 0; b < classes_[i].size(); ++b) {
      const std::size_t f = classes_[i][b];
      if (f < 1 || f > message_count)
        throw Error(Errc::OutOfRange, "class " + idx(i + 1) + " lists message " + idx(f) + " outside [1," +
                                          idx(message_count) + "]");
      if (reverse_[f - 1].cls != 0)
        throw Error(Errc::BadDimensions, "message " + idx(f) + " appears in classes " + idx(reverse_[f - 1].cls) +
                                             " and " + idx(i + 1));
      reverse_[f - 1] = {i + 1, b + 1};
      ++seen;
    }
  }
  if (seen != message_count)
    throw Error(Errc::BadDimensions, "classes cover " + idx(seen) + " of " + idx(message_count) + " messages");
}

std::size_t ClassMap::class_size(std::size_t i) const { return members(i).size(); }

std::vector<std::size_t> ClassMap::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& c : classes_) out.push_back(c.size());
  return out;
}

const std::vector<std::size_t>& ClassMap::members(std::size_t i) const {
  if (i < 1 || i > classes_.size()) throw Error(Errc::OutOfRange, "class " + idx(i) + " not in [1," + idx(classes_.size()) + "]");
  return classes_[i - 1];
}

std::size_t ClassMap::pair_to_global(std::size_t i, std::size_t beta) const {
  const auto& m = members(i);
  if (beta < 1 || beta > m.size())
    throw Error(Errc::OutOfRange, "subclass " + idx(beta) + " not in [1," + idx(m.size()) + "] for class " + idx(i));
  return m[beta - 1];
}

MessagePair ClassMap::global_to_pair(std::size_t f) const {
  if (f < 1 || f > reverse_.size()) throw Error(Errc::OutOfRange, "message index " + idx(f));
  return reverse_[f - 1];
}

// ---- SideInformation -------------------------------------------------------

SideInformation::SideInformation(std::vector<std::vector<std::size_t>> indices, const ClassMap& classes,
                                 std::size_t eta)
    : indices_(std::move(indices)), eta_(eta) {
  if (indices_.size() != classes.class_count())
    throw Error(Errc::BadDimensions, "side information lists " + idx(indices_.size()) + " classes, expected " +
                                         idx(classes.class_count()));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    auto& list = indices_[i];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      throw Error(Errc::BadDimensions, "duplicate subclass index in class " + idx(i + 1));
    for (std::size_t b : list)
      if (b < 1 || b > classes.class_size(i + 1))
        throw Error(Errc::OutOfRange, "subclass " + idx(b) + " not in class " + idx(i + 1));
  }
}

std::size_t SideInformation::count(std::size_t i) const { return ground_truth(i).size(); }

std::size_t SideInformation::total() const noexcept {
  std::size_t t = 0;
  for (const auto& l : indices_) t += l.size();
  return t;
}

std::vector<std::size_t> SideInformation::counts() const {
  std::vector<std::size_t> out;
  for (const auto& l : indices_) out.push_back(l.size());
  return out;
}

const std::vector<std::size_t>& SideInformation::ground_truth(std::size_t i) const {
  if (i < 1 || i > indices_.size()) throw Error(Errc::OutOfRange, "class " + idx(i));
  return indices_[i - 1];
}

bool SideInformation::holds(std::size_t i, std::size_t beta) const {
  const auto& l = ground_truth(i);
  return std::binary_search(l.begin(), l.end(), beta);
}

KnowledgeView SideInformation::view() const noexcept { return KnowledgeView(*this); }

const std::vector<std::size_t>& KnowledgeView::known_indices(std::size_t i) const {
  if (!si_->identifiable(i))
    throw Error(Errc::HiddenIndices, "class " + idx(i) + " is unidentifiable; only its count is known");
  return si_->ground_truth(i);
}

bool KnowledgeView::knows(std::size_t i, std::size_t beta) const {
  const auto& l = known_indices(i);
  return std::binary_search(l.begin(), l.end(), beta);
}

// ---- Scenario --------------------------------------------------------------

std::string_view to_string(Mode mode) noexcept { return mode == Mode::single ? "single" : "multi"; }

Scenario::Scenario(MessageStore store, ClassMap classes, std::size_t eta,
                   const std::vector<std::vector<std::vector<std::size_t>>>& side_information, std::uint64_t seed,
                   std::optional<Matrix> explicit_generator, std::vector<std::size_t> class_order)
    : store_(std::move(store)),
      classes_(std::move(classes)),
      eta_(eta),
      seed_(seed),
      explicit_generator_(std::move(explicit_generator)),
      class_order_(std::move(class_order)) {
  if (store_.count() != classes_.message_count())
    throw Error(Errc::BadDimensions, "store holds " + idx(store_.count()) + " messages, classes cover " +
                                         idx(classes_.message_count()));
  if (eta_ < 1 || eta_ > classes_.class_count())
    throw Error(Errc::OutOfRange, "eta=" + idx(eta_) + " not in [1," + idx(classes_.class_count()) + "]");
  if (side_information.empty()) throw Error(Errc::BadDimensions, "scenario needs at least one user");
  for (const auto& si : side_information) users_.emplace_back(si, classes_, eta_);
  if (class_order_.empty()) {
    class_order_.resize(classes_.class_count());
    std::iota(class_order_.begin(), class_order_.end(), std::size_t{1});
  }
  if (class_order_.size() != classes_.class_count())
    throw Error(Errc::BadDimensions, "class order has wrong length");
}

const SideInformation& Scenario::user(std::size_t u) const {
  if (u < 1 || u > users_.size()) throw Error(Errc::OutOfRange, "user " + idx(u));
  return users_[u - 1];
}

std::size_t Scenario::k_un_of(std::size_t u) const {
  const auto& si = user(u);
  std::size_t m = 0;
  for (std::size_t i = eta_ + 1; i <= class_count(); ++i) m = std::max(m, si.count(i));
  return m;
}

std::size_t Scenario::k_un() const {
  std::size_t m = 0;
  for (std::size_t u = 1; u <= user_count(); ++u) m = std::max(m, k_un_of(u));
  return m;
}

std::size_t Scenario::eta_prime() const noexcept { return ceil_div(eta_ - 1, users_.size()); }

std::size_t Scenario::disclosed(Mode mode) const noexcept { return mode == Mode::single ? eta_ - 1 : eta_prime(); }

// ---- validation ------------------------------------------------------------

bool ValidationReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.tier != CheckTier::guarantee || c.passed; });
}

bool ValidationReport::hypotheses_hold() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.tier != CheckTier::hypothesis || c.passed; });
}

const Check* ValidationReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> ValidationReport::failed(CheckTier tier) const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (c.tier == tier && !c.passed) out.push_back(c.name);
  return out;
}

std::size_t rotation_count(std::size_t i, std::size_t eta, std::size_t m) noexcept {
  if (eta == 0 || i < 1 || i > eta) return 0;
  // j = i, i + eta, i + 2 eta, ... <= m
  return i > m ? 0 : (m - i) / eta + 1;
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(Mode mode) { report_.mode = mode; }

  void add(std::string name, CheckTier tier, const std::vector<std::string>& violations) {
    report_.checks.push_back({std::move(name), tier, violations.empty(), join(violations)});
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

void common_checks(const Scenario& s, Mode mode, ReportBuilder& rb) {
  const std::size_t n = s.code_length(mode);
  std::vector<std::string> v;
  if (s.field().order() < n) v.push_back("q=" + idx(s.field().order()) + " < code length " + idx(n));
  rb.add("field_supports_code", CheckTier::guarantee, v);

  v.clear();
  const std::size_t need = s.k_un() + 1;
  for (std::size_t i = 1; i <= s.class_count(); ++i)
    if (s.classes().class_size(i) < need)
      v.push_back("class " + idx(i) + ": mu=" + idx(s.classes().class_size(i)) + " < k_un+1=" + idx(need));
  rb.add("distinct_indices_per_class", CheckTier::guarantee, v);
}

ValidationReport validate_single(const Scenario& s) {
  ReportBuilder rb(Mode::single);
  const std::size_t eta = s.eta();
  const std::size_t gamma = s.class_count();
  const SideInformation& si = s.user(1);
  const std::size_t k_un = s.k_un_of(1);
  const std::size_t m = k_un + 1;

  std::vector<std::string> v;
  if (s.user_count() != 1) v.push_back(idx(s.user_count()) + " users in a single-user run");
  rb.add("single_user", CheckTier::guarantee, v);

  v.clear();
  for (std::size_t i = 1; i <= eta; ++i)
    if (!(si.count(i) > k_un)) v.push_back("class " + idx(i) + ": k=" + idx(si.count(i)) + " <= k_un=" + idx(k_un));
  rb.add("identifiable_exceeds_kun", CheckTier::hypothesis, v);

  v.clear();
  const std::size_t margin = ceil_div(k_un + 1, eta);
  for (std::size_t i = 1; i <= gamma; ++i) {
    const std::size_t unknown = s.classes().class_size(i) - si.count(i);
    if (unknown < margin)
      v.push_back("class " + idx(i) + ": mu-k=" + idx(unknown) + " < ceil((k_un+1)/eta)=" + idx(margin));
  }
  rb.add("unknown_margin", CheckTier::hypothesis, v);

  common_checks(s, Mode::single, rb);

  // identifiable demand: the designated query needs one unknown index from v
  // and one known index from every other identifiable class
  v.clear();
  for (std::size_t i = 1; i <= eta; ++i) {
    const std::size_t unknown = s.classes().class_size(i) - si.count(i);
    if (unknown < 1) v.push_back("class " + idx(i) + " has no message outside the side information");
    if (eta >= 2 && si.count(i) < 1) v.push_back("class " + idx(i) + " has no side information to disclose");
  }
  rb.add("designated_query_feasible", CheckTier::guarantee, v);

  // unidentifiable demand: class t = ((j-1) mod eta)+1 contributes an unknown
  // index, every other identifiable class a known one
  v.clear();
  if (eta < gamma) {
    for (std::size_t i = 1; i <= eta; ++i) {
      const std::size_t c = rotation_count(i, eta, m);
      const std::size_t unknown = s.classes().class_size(i) - si.count(i);
      if (unknown < c) v.push_back("class " + idx(i) + ": " + idx(unknown) + " unknown < " + idx(c) + " rotations");
      if (si.count(i) < m - c)
        v.push_back("class " + idx(i) + ": k=" + idx(si.count(i)) + " < " + idx(m - c) + " known draws");
    }
  }
  rb.add("rotation_feasible", CheckTier::guarantee, v);
  return rb.take();
}

ValidationReport validate_multi(const Scenario& s) {
  ReportBuilder rb(Mode::multi);
  const std::size_t eta = s.eta();
  const std::size_t users = s.user_count();
  const std::size_t k_un = s.k_un();

  std::vector<std::string> v;
  for (std::size_t u = 1; u <= users; ++u)
    for (std::size_t i = 1; i <= eta; ++i)
      if (!(s.user(u).count(i) > k_un))
        v.push_back("user " + idx(u) + " class " + idx(i) + ": k=" + idx(s.user(u).count(i)) + " <= k_un=" + idx(k_un));
  rb.add("identifiable_exceeds_kun", CheckTier::hypothesis, v);
  rb.add("known_pool_feasible", CheckTier::guarantee, v);

  v.clear();
  if (k_un + 1 < users) v.push_back("k_un+1=" + idx(k_un + 1) + " < U=" + idx(users));
  rb.add("queries_cover_users", CheckTier::hypothesis, v);
  rb.add("queries_cover_users_guarantee", CheckTier::guarantee, v);

  v.clear();
  for (std::size_t u = 1; u <= users; ++u)
    for (std::size_t i = 1; i <= s.class_count(); ++i) {
      const std::size_t unknown = s.classes().class_size(i) - s.user(u).count(i);
      if (unknown < k_un + 1)
        v.push_back("user " + idx(u) + " class " + idx(i) + ": mu-k=" + idx(unknown) + " < k_un+1=" + idx(k_un + 1));
    }
  rb.add("unknown_margin", CheckTier::hypothesis, v);

  v.clear();
  if ((eta - 1) % users != 0)
    v.push_back("(eta-1)=" + idx(eta - 1) + " not divisible by U=" + idx(users));
  rb.add("partition_feasible", CheckTier::guarantee, v);

  common_checks(s, Mode::multi, rb);

  // user u's own demand is served by query u
  v.clear();
  for (std::size_t u = 1; u <= users; ++u)
    for (std::size_t i = 1; i <= eta; ++i) {
      const std::size_t unknown = s.classes().class_size(i) - s.user(u).count(i);
      if (unknown < u)
        v.push_back("user " + idx(u) + " class " + idx(i) + ": " + idx(unknown) + " unknown < " + idx(u));
    }
  rb.add("demand_pool_feasible", CheckTier::guarantee, v);

  // the substitute class picked when no identifiable demand applies
  v.clear();
  for (std::size_t u = 1; u <= users; ++u) {
    bool any = false;
    for (std::size_t i = 1; i <= eta && !any; ++i)
      any = s.classes().class_size(i) - s.user(u).count(i) >= k_un + 1;
    if (!any) v.push_back("user " + idx(u) + ": no identifiable class with k_un+1 unknown messages");
  }
  rb.add("fallback_pool_feasible", CheckTier::guarantee, v);
  return rb.take();
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s, Mode mode) {
  return mode == Mode::single ? validate_single(s) : validate_multi(s);
}

}  // namespace ppir
