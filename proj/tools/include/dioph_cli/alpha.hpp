#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "dioph/analysis.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/numerics.hpp"

namespace dioph::cli {

// A parsed alpha: its value, expansion, and the construction it came from.
struct Alpha {
  std::string name;
  RealScalar value;
  CFExpansion cf;
  std::optional<Construction> construction;
};

// Exactly one of the alpha flags is set.
struct AlphaFlags {
  std::string rational;   // "p/q"
  std::string surd;       // "P,Q,D" for (P + sqrt D) / Q
  std::string named;      // golden | e_minus_1 | pi_literal
  std::string construct;  // thm42 | thm43
  std::string literal;    // "<decimal>@<bits>"
  std::size_t digit_cap = kDefaultDigitCap;

  bool any() const;
};

// Throws ParseError for malformed or conflicting flags.
Alpha parse_alpha(const AlphaFlags& flags);

// The pi literal shipped with the tool, 10^4 bits.
RealScalar pi_literal();

// "3", "2.5" or "5/2" as an exact rational.
mpq_class parse_rational_value(const std::string& text);

}  // namespace dioph::cli
