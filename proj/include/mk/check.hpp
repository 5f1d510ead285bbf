#pragma once

#include <optional>
#include <string>

namespace mk {

/// A failed identity: which law, and the concrete instance that breaks it.
struct Violation {
  std::string law;
  std::string detail;

  std::string to_string() const { return law + ": " + detail; }
};

/// nullopt when every instance of the checked laws holds.
using CheckResult = std::optional<Violation>;

} // namespace mk
