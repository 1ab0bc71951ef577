#include "ppir/exchange.hpp"

#include "ppir/error.hpp"

#include <algorithm>

namespace ppir {

namespace {
std::string idx(std::size_t v) { return std::to_string(v); }
}  // namespace

Generator session_generator(const Scenario& s, Mode mode) {
  const std::size_t n = s.code_length(mode);
  const std::size_t k = s.class_count();
  if (const auto& explicit_rows = s.explicit_generator()) {
    if (explicit_rows->rows() != k || explicit_rows->cols() != n)
      throw Error(Errc::DimensionMismatch, "explicit generator is " + idx(explicit_rows->rows()) + "x" +
                                               idx(explicit_rows->cols()) + ", session needs " + idx(k) + "x" + idx(n));
    return generator_from_explicit(*explicit_rows, s.field());
  }
  return build_systematic_generator(n, k, s.field());
}

Answer server_answer(const MessageStore& store, const ClassMap& classes, const Query& q, std::size_t disclosed,
                     const Generator& g) {
  const std::size_t gamma = classes.class_count();
  if (g.k() != gamma || g.n() != 2 * gamma - disclosed || q.subclass.size() != gamma)
    throw Error(Errc::DimensionMismatch, "query with " + idx(q.subclass.size()) + " pairs, disclosed " +
                                             idx(disclosed) + ", generator [" + idx(g.n()) + "," + idx(g.k()) + "]");
  Matrix messages(gamma, store.length());
  for (std::size_t i = 1; i <= gamma; ++i) {
    const auto w = store.message(classes.pair_to_global(i, q.beta(i)));
    std::copy(w.begin(), w.end(), messages.row(i - 1).begin());
  }
  return {q.index, encode_parities(g, messages)};
}

std::vector<Answer> replay_server(const MessageStore& store, const ClassMap& classes, const ServerView& view,
                                  const Generator& g) {
  std::vector<Answer> out;
  out.reserve(view.queries.size());
  for (const Query& q : view.queries) out.push_back(server_answer(store, classes, q, view.disclosed, g));
  return out;
}

ClientStore ClientStore::for_user(const Scenario& s, std::size_t u) {
  ClientStore cs;
  const KnowledgeView known = s.user(u).view();
  for (std::size_t i = 1; i <= s.class_count(); ++i) {
    if (!known.identifiable(i)) continue;
    for (std::size_t b : known.known_indices(i)) {
      const auto w = s.store().message(s.classes().pair_to_global(i, b));
      cs.contents_[{i, b}] = {w.begin(), w.end()};
    }
  }
  return cs;
}

std::optional<std::span<const Symbol>> ClientStore::lookup(std::size_t cls, std::size_t sub) const {
  auto it = contents_.find({cls, sub});
  if (it == contents_.end()) return std::nullopt;
  return std::span<const Symbol>(it->second);
}

Matrix client_decode(const Query& q, const Answer& a, const ClientStore& client, const Generator& g) {
  const std::size_t gamma = g.k();
  const std::size_t parity_rows = g.parity_count();
  if (q.subclass.size() != gamma || a.parities.rows() != parity_rows)
    throw Error(Errc::DimensionMismatch, "answer has " + idx(a.parities.rows()) + " parity rows, code has " +
                                             idx(parity_rows));
  const std::size_t length = a.parities.cols();

  std::vector<std::size_t> positions;
  std::vector<std::span<const Symbol>> rows;
  for (std::size_t i = 1; i <= gamma; ++i) {
    if (auto w = client.lookup(i, q.beta(i))) {
      if (w->size() != length) throw Error(Errc::LengthMismatch, "side information length differs from answer");
      positions.push_back(i - 1);
      rows.push_back(*w);
    }
  }

  if (positions.size() >= gamma) {
    Matrix out(gamma, length);
    for (std::size_t r = 0; r < gamma; ++r) std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
    return out;
  }
  const std::size_t missing = gamma - positions.size();
  if (missing > parity_rows)
    throw Error(Errc::InsufficientKnowns, "query " + idx(q.index) + ": " + idx(positions.size()) + " known + " +
                                              idx(parity_rows) + " parities < " + idx(gamma));
  for (std::size_t p = 0; p < missing; ++p) {
    positions.push_back(gamma + p);
    rows.push_back(a.parities.row(p));
  }
  Matrix known(gamma, length);
  for (std::size_t r = 0; r < gamma; ++r) std::copy(rows[r].begin(), rows[r].end(), known.row(r).begin());
  return ErasureDecoder(g, positions).decode_block(known);
}

std::size_t closed_form_download(const Scenario& s, Mode mode) {
  const std::size_t k_un = mode == Mode::single ? s.k_un_of(1) : s.k_un();
  const std::size_t parity_rows = s.class_count() - s.disclosed(mode);
  return (k_un + 1) * parity_rows * s.store().length();
}

SessionTrace execute_plan(const Scenario& s, const QueryPlan& plan, const Generator& g) {
  SessionTrace trace;
  trace.mode = plan.mode;
  trace.plan = plan.server_view();
  trace.code_length = g.n();
  trace.code_dimension = g.k();
  trace.message_length = s.store().length();
  trace.answers = replay_server(s.store(), s.classes(), trace.plan, g);
  for (const Answer& a : trace.answers) trace.downloaded += a.parities.rows() * a.parities.cols();

  const std::size_t participants = plan.mode == Mode::single ? 1 : s.user_count();
  for (std::size_t u = 1; u <= participants; ++u) {
    UserOutcome outcome;
    outcome.user = u;
    outcome.demand = plan.secrets.demands.at(u - 1);
    const ClientStore client = ClientStore::for_user(s, u);
    for (std::size_t j = 0; j < plan.queries.size(); ++j) {
      const Query& q = plan.queries[j];
      Matrix decoded;
      try {
        decoded = client_decode(q, trace.answers[j], client, g);
      } catch (const Error& e) {
        if (e.code() != Errc::InsufficientKnowns) throw;
        outcome.skipped_queries.push_back(q.index);
        continue;
      }
      outcome.decoded_queries.push_back(q.index);
      for (std::size_t i = 1; i <= s.class_count(); ++i) {
        const std::size_t f = s.classes().pair_to_global(i, q.beta(i));
        const auto truth = s.store().message(f);
        if (!std::equal(truth.begin(), truth.end(), decoded.row(i - 1).begin()))
          throw Error(Errc::RecoveryFailed, "user " + idx(u) + " decoded message " + idx(f) + " incorrectly");
        outcome.decoded_messages.push_back(f);
      }
    }
    std::sort(outcome.decoded_messages.begin(), outcome.decoded_messages.end());
    outcome.decoded_messages.erase(std::unique(outcome.decoded_messages.begin(), outcome.decoded_messages.end()),
                                   outcome.decoded_messages.end());
    for (std::size_t f : outcome.decoded_messages) {
      const MessagePair p = s.classes().global_to_pair(f);
      if (p.cls == outcome.demand && !s.user(u).holds(p.cls, p.sub)) {
        outcome.new_message = f;
        break;
      }
    }
    if (!outcome.new_message)
      throw Error(Errc::RecoveryFailed, "user " + idx(u) + " recovered no new message from class " + idx(outcome.demand));
    trace.users.push_back(std::move(outcome));
  }
  return trace;
}

SessionTrace run_session(const Scenario& s, Mode mode, std::span<const std::size_t> demands, std::uint64_t seed,
                         bool force) {
  Rng rng(seed);
  const QueryPlan plan = generate_plan(s, mode, demands, rng, force);
  const Generator g = session_generator(s, mode);
  SessionTrace trace = execute_plan(s, plan, g);
  const std::size_t expected = closed_form_download(s, mode);
  if (trace.downloaded != expected)
    throw Error(Errc::DimensionMismatch, "downloaded " + idx(trace.downloaded) + " symbols, closed form gives " +
                                             idx(expected));
  return trace;
}

}  // namespace ppir
