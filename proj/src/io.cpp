#include "ppir/io.hpp"

#include "ppir/error.hpp"
#include "ppir/seed.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ppir {

namespace {

const std::set<std::string> kScenarioKeys = {"description", "field_order", "symbols_per_message", "classes", "eta",
                                             "identifiable", "users", "explicit_generator", "seed"};

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::ParseError, what); }

std::size_t as_count(const Json& v, const std::string& what) {
  if (!v.is_number_unsigned()) fail(what + " must be a non-negative integer");
  return v.get<std::size_t>();
}

const Json& member(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

struct Descriptor {
  std::optional<std::size_t> id;
  std::optional<std::vector<Symbol>> symbols;  // empty optional = random
};

std::vector<Symbol> parse_symbols(const Json& v, std::size_t length, std::uint32_t q, const std::string& where) {
  if (!v.is_array()) fail(where + ": symbols must be an array");
  if (v.size() != length) fail(where + ": " + std::to_string(v.size()) + " symbols, expected " + std::to_string(length));
  std::vector<Symbol> out;
  for (const Json& x : v) {
    const std::size_t s = as_count(x, where + " symbol");
    if (s >= q) fail(where + ": symbol " + std::to_string(s) + " not in GF(" + std::to_string(q) + ")");
    out.push_back(static_cast<Symbol>(s));
  }
  return out;
}

Descriptor parse_descriptor(const Json& v, std::size_t length, std::uint32_t q, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() != "random") fail(where + ": unknown descriptor \"" + v.get<std::string>() + "\"");
    return {};
  }
  if (v.is_array()) return {std::nullopt, parse_symbols(v, length, q, where)};
  if (!v.is_object()) fail(where + ": descriptor must be a symbol array, \"random\" or an object");
  Descriptor d;
  for (const auto& [key, value] : v.items())
    if (key != "id" && key != "symbols") fail(where + ": unknown key \"" + key + "\"");
  d.id = as_count(member(v, "id"), where + " id");
  if (auto it = v.find("symbols"); it != v.end() && !(it->is_string() && it->get<std::string>() == "random"))
    d.symbols = parse_symbols(*it, length, q, where);
  return d;
}

Scenario build(const Json& doc) {
  if (!doc.is_object()) fail("scenario must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kScenarioKeys.contains(key)) fail("unknown key \"" + key + "\"");

  const std::size_t order = as_count(member(doc, "field_order"), "field_order");
  if (order > kMaxFieldOrder) fail("field_order " + std::to_string(order) + " exceeds " + std::to_string(kMaxFieldOrder));
  const PrimeField field(static_cast<std::uint32_t>(order));
  const std::uint32_t q = field.order();
  const std::size_t length = as_count(member(doc, "symbols_per_message"), "symbols_per_message");
  if (!member(doc, "seed").is_number_unsigned()) fail("seed must be an unsigned integer");
  const std::uint64_t seed = member(doc, "seed").get<std::uint64_t>();
  const std::size_t eta = as_count(member(doc, "eta"), "eta");

  const Json& classes = member(doc, "classes");
  if (!classes.is_array() || classes.empty()) fail("classes must be a non-empty array");
  const std::size_t gamma = classes.size();

  std::vector<std::vector<Descriptor>> descriptors(gamma);
  std::size_t with_id = 0, total = 0;
  for (std::size_t c = 0; c < gamma; ++c) {
    if (!classes[c].is_array() || classes[c].empty()) fail("class " + std::to_string(c + 1) + " must be a non-empty array");
    for (std::size_t b = 0; b < classes[c].size(); ++b) {
      auto d = parse_descriptor(classes[c][b], length, q,
                                "class " + std::to_string(c + 1) + " message " + std::to_string(b + 1));
      with_id += d.id.has_value();
      ++total;
      descriptors[c].push_back(std::move(d));
    }
  }
  if (with_id != 0 && with_id != total) fail("either every message descriptor carries an id or none does");

  // file class c, position b -> global index
  std::vector<std::vector<std::size_t>> global(gamma);
  std::vector<std::vector<Symbol>> messages(total);
  std::vector<bool> seen(total + 1, false);
  std::size_t next = 0;
  for (std::size_t c = 0; c < gamma; ++c) {
    for (const Descriptor& d : descriptors[c]) {
      const std::size_t f = d.id ? *d.id : ++next;
      if (f < 1 || f > total) fail("message id " + std::to_string(f) + " not in [1," + std::to_string(total) + "]");
      if (seen[f]) fail("message id " + std::to_string(f) + " used twice");
      seen[f] = true;
      global[c].push_back(f);
      if (d.symbols) {
        messages[f - 1] = *d.symbols;
      } else {
        messages[f - 1].resize(length);
        for (std::size_t l = 0; l < length; ++l) messages[f - 1][l] = random_symbol(seed, f, l, q);
      }
    }
  }

  // Internal order: identifiable classes first, each group in file order.
  std::vector<std::size_t> order_of(gamma);  // internal position -> file position (0-based)
  if (auto it = doc.find("identifiable"); it != doc.end()) {
    if (!it->is_array() || it->size() != eta) fail("identifiable must list exactly eta classes");
    std::set<std::size_t> picked;
    for (const Json& x : *it) {
      const std::size_t c = as_count(x, "identifiable entry");
      if (c < 1 || c > gamma) fail("identifiable class " + std::to_string(c) + " not in [1," + std::to_string(gamma) + "]");
      if (!picked.insert(c - 1).second) fail("identifiable class " + std::to_string(c) + " listed twice");
    }
    std::size_t at = 0;
    for (std::size_t c : picked) order_of[at++] = c;
    for (std::size_t c = 0; c < gamma; ++c)
      if (!picked.contains(c)) order_of[at++] = c;
  } else {
    for (std::size_t c = 0; c < gamma; ++c) order_of[c] = c;
  }
  std::vector<std::vector<std::size_t>> class_lists(gamma);
  std::vector<std::size_t> class_order(gamma);
  for (std::size_t i = 0; i < gamma; ++i) {
    class_lists[i] = global[order_of[i]];
    class_order[i] = order_of[i] + 1;
  }

  const Json& users = member(doc, "users");
  if (!users.is_array() || users.empty()) fail("users must be a non-empty array");
  std::vector<std::vector<std::vector<std::size_t>>> side(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::string where = "user " + std::to_string(u + 1);
    const Json& user = users[u];
    if (!user.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : user.items())
      if (key != "side_information" && key != "identifiable_known") fail(where + ": unknown key \"" + key + "\"");
    if (auto it = user.find("identifiable_known"); it != user.end() && !(it->is_boolean() && it->get<bool>()))
      fail(where + ": identifiable classes must have known subclass indices");
    const Json& lists = member(user, "side_information");
    if (!lists.is_array() || lists.size() != gamma)
      fail(where + ": side_information needs one list per class (" + std::to_string(gamma) + ")");
    side[u].resize(gamma);
    for (std::size_t i = 0; i < gamma; ++i) {
      const Json& list = lists[order_of[i]];
      if (!list.is_array()) fail(where + ": side_information entries must be arrays");
      for (const Json& x : list) side[u][i].push_back(as_count(x, where + " subclass index"));
    }
  }

  std::optional<Matrix> explicit_generator;
  if (auto it = doc.find("explicit_generator"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail("explicit_generator must be a non-empty array of rows");
    std::vector<std::vector<Symbol>> rows;
    for (const Json& row : *it) {
      if (!row.is_array() || row.size() != (*it)[0].size()) fail("explicit_generator rows must have equal length");
      rows.push_back(parse_symbols(row, row.size(), q, "explicit_generator"));
    }
    explicit_generator = Matrix::from_rows(rows);
  }

  return Scenario(MessageStore(field, length, messages), ClassMap(std::move(class_lists), total), eta, side, seed,
                  std::move(explicit_generator), std::move(class_order));
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<Symbol>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Json flag_json(const TheoremFlag& f) {
  return Json{{"verdict", to_string(f.verdict)}, {"witnesses", f.witnesses}, {"detail", f.detail}};
}

}  // namespace

Symbol random_symbol(std::uint64_t seed, std::size_t f, std::size_t l, std::uint32_t q) noexcept {
  const std::uint64_t tag = (static_cast<std::uint64_t>(f) << 32) | static_cast<std::uint64_t>(l);
  return static_cast<Symbol>(splitmix64(seed + kGolden * tag) % q);
}

Scenario parse_scenario(std::string_view text) {
  try {
    return build(Json::parse(text));
  } catch (const Json::exception& e) {
    fail(e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    fail(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

Json rational_json(const Rational& r) { return to_fraction(r); }

Json validation_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const Check& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"tier", c.tier == CheckTier::guarantee ? "guarantee" : "hypothesis"},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  return Json{{"mode", to_string(report.mode)},
              {"ok", report.ok()},
              {"hypotheses_hold", report.hypotheses_hold()},
              {"checks", checks}};
}

Json trace_json(const Scenario& s, const SessionTrace& trace, std::span<const std::size_t> demands,
                std::uint64_t seed) {
  Json queries = Json::array();
  for (const Query& q : trace.plan.queries) queries.push_back(q.subclass);
  Json answers = Json::array();
  for (const Answer& a : trace.answers) answers.push_back({{"query", a.query_index}, {"parities", matrix_json(a.parities)}});
  Json users = Json::array();
  for (const UserOutcome& u : trace.users) {
    Json entry{{"user", u.user},
               {"demand", u.demand},
               {"decoded_queries", u.decoded_queries},
               {"skipped_queries", u.skipped_queries},
               {"decoded_messages", u.decoded_messages}};
    if (u.new_message) {
      const MessagePair p = s.classes().global_to_pair(*u.new_message);
      entry["new_message"] = *u.new_message;
      entry["new_message_pair"] = {p.cls, p.sub};
    } else {
      entry["new_message"] = nullptr;
    }
    users.push_back(std::move(entry));
  }
  const RateParams params = RateParams::from(s);
  const Rational closed = trace.mode == Mode::single ? rate_isi(params) : rate_multi(params);
  return Json{{"mode", to_string(trace.mode)},
              {"demands", std::vector<std::size_t>(demands.begin(), demands.end())},
              {"seed", seed},
              {"field_order", s.field().order()},
              {"class_order", s.class_order()},
              {"code", {{"n", trace.code_length}, {"k", trace.code_dimension}, {"explicit", s.explicit_generator().has_value()}}},
              {"server_view", {{"disclosed", trace.plan.disclosed}, {"queries", queries}}},
              {"answers", answers},
              {"users", users},
              {"message_length", trace.message_length},
              {"downloaded", trace.downloaded},
              {"rate", rational_json(trace.rate())},
              {"closed_form_rate", rational_json(closed)}};
}

Json rates_json(const Scenario& s) {
  const RateParams p = RateParams::from(s);
  const ComparisonReport c = theorem_conditions(p);
  return Json{{"classes", p.gamma},
              {"eta", p.eta},
              {"users", p.users()},
              {"mu", p.mu},
              {"k", p.k},
              {"k_un_user1", p.k_un_of(1)},
              {"k_un", p.k_un()},
              {"eta_prime", p.eta_prime()},
              {"rates",
               {{"isi", rational_json(c.isi)},
                {"usi", rational_json(c.usi)},
                {"multi", rational_json(c.multi)},
                {"naive_multi", rational_json(c.naive_multi)}}},
              {"isi_over_usi", rational_json(c.isi_over_usi)},
              {"theorems",
               {{"base_hypotheses", c.base_hypotheses}, {"T2", flag_json(c.t2)}, {"T3", flag_json(c.t3)}, {"T4", flag_json(c.t4)}}},
              {"validation", {{"single", validation_json(validate_scenario(s, Mode::single))},
                              {"multi", validation_json(validate_scenario(s, Mode::multi))}}}};
}

Json privacy_json(const PrivacyReport& r, std::uint64_t seed) {
  Json failures = Json::array();
  for (const CensusFailure& f : r.census.failures)
    failures.push_back({{"run", f.run}, {"demands", f.demands}, {"reason", f.reason}});
  Json distances = Json::array();
  for (const DistanceEntry& d : r.distances)
    distances.push_back({{"a", d.demands_a}, {"b", d.demands_b}, {"tv", rational_json(d.tv)}, {"tv_approx", to_double(d.tv)}});
  return Json{{"mode", to_string(r.mode)},
              {"runs", r.census.runs},
              {"seed", seed},
              {"census",
               {{"plans", r.census.plans},
                {"passed", r.census.passed},
                {"generation_errors", r.census.generation_errors},
                {"pass_rate", rational_json(r.census.pass_rate())},
                {"failures", failures}}},
              {"distribution",
               {{"method", r.distribution_method},
                {"samples_per_demand", r.samples_per_demand},
                {"note", r.note},
                {"demands", r.demands},
                {"support_sizes", r.support_sizes},
                {"distances", distances}}}};
}

std::string to_text(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::ParseError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::ParseError, "failed writing " + path.string());
}

}  // namespace ppir
