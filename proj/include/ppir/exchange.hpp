#pragma once

#include "ppir/mds.hpp"
#include "ppir/query.hpp"
#include "ppir/rational.hpp"
#include "ppir/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ppir {

struct Answer {
  std::size_t query_index = 0;
  Matrix parities;  // (n - Gamma) x L
  friend bool operator==(const Answer&, const Answer&) = default;
};

// The generator a session uses for every query: the scenario's explicit
// matrix when present, otherwise the default Reed-Solomon construction, with
// n = 2 Gamma - disclosed and k = Gamma.
Generator session_generator(const Scenario& s, Mode mode);

// The server's whole job. It sees the store, the query, and the disclosed
// code parameter; nothing about demands or side information reaches it.
Answer server_answer(const MessageStore& store, const ClassMap& classes, const Query& q, std::size_t disclosed,
                     const Generator& g);

std::vector<Answer> replay_server(const MessageStore& store, const ClassMap& classes, const ServerView& view,
                                  const Generator& g);

// Contents a client can place at systematic positions: its side-information
// messages from identifiable classes, keyed by (class, subclass).
class ClientStore {
 public:
  static ClientStore for_user(const Scenario& s, std::size_t u);

  std::optional<std::span<const Symbol>> lookup(std::size_t cls, std::size_t sub) const;
  std::size_t size() const noexcept { return contents_.size(); }

 private:
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Symbol>> contents_;
};

// Recovers all Gamma queried messages (Gamma x L, class order) from the
// parities plus whatever the client already holds. Throws InsufficientKnowns
// when known positions plus parities fall short of Gamma.
Matrix client_decode(const Query& q, const Answer& a, const ClientStore& client, const Generator& g);

struct UserOutcome {
  std::size_t user = 0;
  std::size_t demand = 0;
  std::vector<std::size_t> decoded_queries;
  std::vector<std::size_t> skipped_queries;
  std::vector<std::size_t> decoded_messages;  // global indices, ascending
  std::optional<std::size_t> new_message;     // first decoded demand-class message outside S
};

struct SessionTrace {
  Mode mode = Mode::single;
  ServerView plan;
  std::size_t code_length = 0;
  std::size_t code_dimension = 0;
  std::size_t message_length = 0;
  std::vector<Answer> answers;
  std::vector<UserOutcome> users;
  std::size_t downloaded = 0;  // D, counted from the answers

  Rational rate() const { return Rational(message_length, downloaded); }
};

// (k_un + 1) * parity rows * L
std::size_t closed_form_download(const Scenario& s, Mode mode);

// Answers and decodes an existing plan. Throws RecoveryFailed if a decoded
// symbol disagrees with the store or a user ends without a new message from
// its demand class.
SessionTrace execute_plan(const Scenario& s, const QueryPlan& plan, const Generator& g);

SessionTrace run_session(const Scenario& s, Mode mode, std::span<const std::size_t> demands, std::uint64_t seed,
                         bool force = false);

}  // namespace ppir
