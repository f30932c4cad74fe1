#include "dioph_cli/alpha.hpp"

#include <string_view>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/farey.hpp"

namespace dioph::cli {

namespace {

#include "pi_digits.inc"

constexpr unsigned kPiBits = 10'000;
constexpr std::size_t kEagerQuotients = 64;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

mpz_class parse_integer(const std::string& text) {
  mpz_class v;
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  if (body.empty() || v.set_str(std::string(body), 10) != 0) throw ParseError("invalid integer: " + text);
  return v;
}

Alpha from_rational(const std::string& text) {
  const Fraction f = Fraction::parse(text);
  if (f.den() == 0) throw ParseError("alpha must be finite: " + text);
  mpq_class v(f.num(), f.den());
  v.canonicalize();
  return {text, RealScalar::rational(v), cf_from_rational(f.num(), f.den()), std::nullopt};
}

Alpha from_surd(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ParseError("surd expects P,Q,D: " + text);
  const mpz_class P = parse_integer(parts[0]);
  const mpz_class Q = parse_integer(parts[1]);
  const mpz_class D = parse_integer(parts[2]);
  if (Q == 0) throw ParseError("surd denominator is zero: " + text);
  if (D < 0) throw ParseError("surd radicand is negative: " + text);
  return {"(" + parts[0] + "+sqrt(" + parts[2] + "))/" + parts[1], RealScalar::surd(P, Q, D), cf_from_surd(P, Q, D),
          std::nullopt};
}

Alpha from_named(const std::string& name) {
  if (name == "golden") return {name, RealScalar::surd(1, 2, 5), cf_from_surd(1, 2, 5), std::nullopt};
  if (name == "e_minus_1") {
    CFExpansion cf = cf_e_minus_1();
    return {name, cf.value(), cf, std::nullopt};
  }
  if (name == "pi_literal") {
    RealScalar pi = pi_literal();
    return {name, pi, cf_from_real(pi, kEagerQuotients), std::nullopt};
  }
  throw ParseError("unknown named alpha: " + name);
}

Alpha from_construction(const std::string& name, std::size_t digit_cap) {
  Construction c = [&] {
    if (name == "thm42") return construct_thm42(digit_cap);
    if (name == "thm43") return construct_thm43(digit_cap);
    throw ParseError("unknown construction: " + name);
  }();
  return {name, c.cf.value(), c.cf, c};
}

Alpha from_literal(const std::string& text) {
  const auto at = text.find('@');
  if (at == std::string::npos) throw ParseError("literal expects <decimal>@<bits>: " + text);
  const std::string digits = text.substr(0, at);
  const mpz_class bits = parse_integer(text.substr(at + 1));
  if (bits < 1 || bits > (1 << 24)) throw ParseError("literal bits out of range: " + text);
  RealScalar v = RealScalar::literal(digits, static_cast<unsigned>(bits.get_ui()));
  return {text, v, cf_from_real(v, 0), std::nullopt};
}

}  // namespace

bool AlphaFlags::any() const {
  return !rational.empty() || !surd.empty() || !named.empty() || !construct.empty() || !literal.empty();
}

RealScalar pi_literal() { return RealScalar::literal(kPiDigits, kPiBits); }

mpq_class parse_rational_value(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    const Fraction f = Fraction::parse(text);
    if (f.den() == 0) throw ParseError("expected a finite value: " + text);
    mpq_class v(f.num(), f.den());
    v.canonicalize();
    return v;
  }
  return parse_decimal(text);
}

Alpha parse_alpha(const AlphaFlags& flags) {
  const int set = !flags.rational.empty() + !flags.surd.empty() + !flags.named.empty() + !flags.construct.empty() +
                  !flags.literal.empty();
  if (set == 0) throw ParseError("an alpha is required (--rational, --surd, --named, --construct or --literal)");
  if (set > 1) throw ParseError("give exactly one alpha flag");
  if (!flags.rational.empty()) return from_rational(flags.rational);
  if (!flags.surd.empty()) return from_surd(flags.surd);
  if (!flags.named.empty()) return from_named(flags.named);
  if (!flags.construct.empty()) return from_construction(flags.construct, flags.digit_cap);
  return from_literal(flags.literal);
}

}  // namespace dioph::cli
