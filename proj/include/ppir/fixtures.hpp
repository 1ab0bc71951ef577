#pragma once

#include <span>
#include <string_view>

namespace ppir {

// Scenario files from fixtures/, compiled into the library.
struct EmbeddedFixture {
  std::string_view name;  // file stem
  std::string_view text;
};

std::span<const EmbeddedFixture> embedded_fixtures() noexcept;

// Throws Errc::OutOfRange for an unknown name.
std::string_view fixture_text(std::string_view name);

}  // namespace ppir
