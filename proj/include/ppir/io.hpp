#pragma once

#include "ppir/audit.hpp"
#include "ppir/exchange.hpp"
#include "ppir/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace ppir {

using Json = nlohmann::ordered_json;

// Symbol l (0-based) of global message f (1-based) for a "random" descriptor.
Symbol random_symbol(std::uint64_t seed, std::size_t f, std::size_t l, std::uint32_t q) noexcept;

// Every failure, malformed JSON or an inconsistent model alike, surfaces as
// Errc::ParseError with the underlying reason in the message.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

Json rational_json(const Rational& r);
Json validation_json(const ValidationReport& report);
Json trace_json(const Scenario& s, const SessionTrace& trace, std::span<const std::size_t> demands,
                std::uint64_t seed);
Json rates_json(const Scenario& s);
Json privacy_json(const PrivacyReport& report, std::uint64_t seed);

// Two-space indentation and a trailing newline, so equal documents are equal bytes.
std::string to_text(const Json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ppir
