#pragma once

#include "ppir/field.hpp"
#include "ppir/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppir {

// All domain indices (class i, subclass beta, global message f, user u,
// query j) are 1-based, as in the usual statement of the protocol.

struct MessagePair {
  std::size_t cls = 0;
  std::size_t sub = 0;
  friend bool operator==(const MessagePair&, const MessagePair&) = default;
};

class MessageStore {
 public:
  MessageStore(const PrimeField& field, std::size_t length, const std::vector<std::vector<Symbol>>& messages);

  std::size_t count() const noexcept { return count_; }
  std::size_t length() const noexcept { return length_; }
  const PrimeField& field() const noexcept { return field_; }
  std::span<const Symbol> message(std::size_t f) const;

 private:
  PrimeField field_;
  std::size_t count_;
  std::size_t length_;
  std::vector<Symbol> data_;
};

// Partition of [F] into classes; list i holds the global indices of class i
// in subclass order.
class ClassMap {
 public:
  ClassMap(std::vector<std::vector<std::size_t>> classes, std::size_t message_count);

  std::size_t class_count() const noexcept { return classes_.size(); }
  std::size_t message_count() const noexcept { return reverse_.size(); }
  std::size_t class_size(std::size_t i) const;
  std::vector<std::size_t> sizes() const;
  const std::vector<std::size_t>& members(std::size_t i) const;

  std::size_t pair_to_global(std::size_t i, std::size_t beta) const;
  MessagePair global_to_pair(std::size_t f) const;

 private:
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<MessagePair> reverse_;
};

class KnowledgeView;

// Ground truth of one user's side information: per class, the sorted subclass
// indices it holds. Classes 1..eta are identifiable to the user.
class SideInformation {
 public:
  SideInformation(std::vector<std::vector<std::size_t>> indices, const ClassMap& classes, std::size_t eta);

  std::size_t class_count() const noexcept { return indices_.size(); }
  std::size_t eta() const noexcept { return eta_; }
  bool identifiable(std::size_t i) const noexcept { return i >= 1 && i <= eta_; }
  std::size_t count(std::size_t i) const;
  std::size_t total() const noexcept;
  std::vector<std::size_t> counts() const;

  // Oracle access, for the simulator and audits only.
  const std::vector<std::size_t>& ground_truth(std::size_t i) const;
  bool holds(std::size_t i, std::size_t beta) const;

  // What the user itself can act on when building queries.
  KnowledgeView view() const noexcept;

 private:
  std::vector<std::vector<std::size_t>> indices_;
  std::size_t eta_;
};

// User-facing projection of SideInformation: counts for every class, indices
// only for identifiable classes. Reading indices of an unidentifiable class
// throws Errc::HiddenIndices.
class KnowledgeView {
 public:
  std::size_t class_count() const noexcept { return si_->class_count(); }
  std::size_t eta() const noexcept { return si_->eta(); }
  bool identifiable(std::size_t i) const noexcept { return si_->identifiable(i); }
  std::size_t count(std::size_t i) const { return si_->count(i); }
  const std::vector<std::size_t>& known_indices(std::size_t i) const;
  bool knows(std::size_t i, std::size_t beta) const;

 private:
  friend class SideInformation;
  explicit KnowledgeView(const SideInformation& si) noexcept : si_(&si) {}
  const SideInformation* si_;
};

enum class Mode { single, multi };

std::string_view to_string(Mode mode) noexcept;

class Scenario {
 public:
  // side_information[u][i] lists the subclass indices user u+1 holds in class i+1.
  Scenario(MessageStore store, ClassMap classes, std::size_t eta,
           const std::vector<std::vector<std::vector<std::size_t>>>& side_information, std::uint64_t seed,
           std::optional<Matrix> explicit_generator = std::nullopt, std::vector<std::size_t> class_order = {});

  const MessageStore& store() const noexcept { return store_; }
  const ClassMap& classes() const noexcept { return classes_; }
  const PrimeField& field() const noexcept { return store_.field(); }
  std::size_t class_count() const noexcept { return classes_.class_count(); }
  std::size_t eta() const noexcept { return eta_; }
  std::size_t user_count() const noexcept { return users_.size(); }
  const SideInformation& user(std::size_t u) const;
  std::uint64_t seed() const noexcept { return seed_; }
  const std::optional<Matrix>& explicit_generator() const noexcept { return explicit_generator_; }
  // class_order()[i-1] is the 1-based position of class i in the source file.
  const std::vector<std::size_t>& class_order() const noexcept { return class_order_; }

  // max side-information count over unidentifiable classes for one user
  std::size_t k_un_of(std::size_t u) const;
  // ... and over all users
  std::size_t k_un() const;
  // ceil((eta - 1) / U)
  std::size_t eta_prime() const noexcept;
  // Value sent to the server with the plan: eta-1 (single) or eta' (multi).
  std::size_t disclosed(Mode mode) const noexcept;
  std::size_t code_length(Mode mode) const noexcept { return 2 * class_count() - disclosed(mode); }

 private:
  MessageStore store_;
  ClassMap classes_;
  std::size_t eta_;
  std::vector<SideInformation> users_;
  std::uint64_t seed_;
  std::optional<Matrix> explicit_generator_;
  std::vector<std::size_t> class_order_;
};

enum class CheckTier {
  hypothesis,  // literal precondition of the rate theorem; reported only
  guarantee,   // condition under which generation can never exhaust a pool
};

struct Check {
  std::string name;
  CheckTier tier;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  Mode mode;
  std::vector<Check> checks;

  // Gate for running the protocol: every guarantee check passed.
  bool ok() const noexcept;
  bool hypotheses_hold() const noexcept;
  const Check* find(std::string_view name) const noexcept;
  std::vector<std::string> failed(CheckTier tier) const;
};

ValidationReport validate_scenario(const Scenario& s, Mode mode);

// number of queries j in 1..m with ((j-1) mod eta) + 1 == i
std::size_t rotation_count(std::size_t i, std::size_t eta, std::size_t m) noexcept;

}  // namespace ppir
