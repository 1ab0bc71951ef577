#pragma once

#include "ppir/fixtures.hpp"
#include "ppir/io.hpp"
#include "ppir/query.hpp"
#include "ppir/scenario.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace ppir::test {

inline Scenario fixture(std::string_view name) { return parse_scenario(fixture_text(name)); }

inline std::vector<Query> queries(const std::vector<std::vector<std::size_t>>& rows) {
  std::vector<Query> out;
  for (std::size_t j = 0; j < rows.size(); ++j) out.push_back({j + 1, rows[j]});
  return out;
}

std::uint32_t next_prime(std::uint32_t n);

// Messages filled by the "random" expansion of `seed`; global indices run
// sequentially through the classes.
Scenario make_scenario(std::uint32_t q, std::size_t length, const std::vector<std::size_t>& sizes, std::size_t eta,
                       const std::vector<std::vector<std::vector<std::size_t>>>& side, std::uint64_t seed);

// Random scenario meeting both the rate theorem's preconditions and every
// guarantee check of `mode` (by rejection).
Scenario random_conforming(Mode mode, Rng& rng);

}  // namespace ppir::test
