#include "detsing/poly_io.hpp"

#include <cctype>
#include <sstream>

#include "detsing/error.hpp"

namespace detsing {

namespace {

class Parser {
 public:
  Parser(const RingPtr& ring, std::string_view text) : ring_(ring), text_(normalize_minus(text)) {}

  Polynomial parse() {
    std::vector<Term> terms;
    skip_space();
    if (at_end()) fail("empty input");
    bool first = true;
    while (true) {
      skip_space();
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = (peek() == '-');
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      Term t = parse_term();
      if (negative) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
      skip_space();
      if (at_end()) break;
    }
    return Polynomial::from_terms(ring_, std::move(terms));
  }

 private:
  static std::string normalize_minus(std::string_view text) {
    // U+2212 MINUS SIGN is accepted as '-'.
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
          static_cast<unsigned char>(text[i + 1]) == 0x88 &&
          static_cast<unsigned char>(text[i + 2]) == 0x92) {
        out.push_back('-');
        i += 2;
      } else {
        out.push_back(text[i]);
      }
    }
    return out;
  }

  Term parse_term() {
    Term t{Monomial(), Scalar(1)};
    bool need_factor = true;
    while (need_factor) {
      skip_space();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.coeff *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
        const std::string name = parse_name();
        const VarId v = ring_->id(name);
        unsigned power = 1;
        skip_space();
        if (peek() == '^') {
          ++pos_;
          skip_space();
          power = parse_exponent();
        }
        t.mono = t.mono * Monomial::variable(v, power);
      } else {
        fail("expected a coefficient or variable");
      }
      skip_space();
      need_factor = (peek() == '*');
      if (need_factor) ++pos_;
    }
    return t;
  }

  Scalar parse_number() {
    const mpz_class num(parse_digits());
    skip_space();
    if (peek() == '/') {
      ++pos_;
      skip_space();
      const mpz_class den(parse_digits());
      if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in coefficient");
      Scalar q(num, den);
      q.canonicalize();
      return q;
    }
    return Scalar(num);
  }

  unsigned parse_exponent() {
    const std::string digits = parse_digits();
    if (digits.size() > 4) fail("exponent too large");
    return static_cast<unsigned>(std::stoul(digits));
  }

  std::string parse_digits() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return text_.substr(start, pos_ - start);
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_space() {
    while (std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg + " at offset " + std::to_string(pos_) + " in '" +
                                            text_ + "'");
  }

  const RingPtr& ring_;
  std::string text_;
  std::size_t pos_ = 0;
};

void write_monomial(std::ostream& os, const Ring& ring, const Monomial& m) {
  bool first = true;
  for (VarId v = 0; v < ring.size(); ++v) {
    const unsigned e = m.exponent(v);
    if (e == 0) continue;
    if (!first) os << '*';
    first = false;
    os << ring.name(v);
    if (e > 1) os << '^' << e;
  }
}

}  // namespace

Polynomial parse_polynomial(const RingPtr& ring, std::string_view text) {
  return Parser(ring, text).parse();
}

std::string format_polynomial(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  const CoefficientField& field = f.field();
  bool first = true;
  for (const Term& t : f.terms()) {
    Scalar c = field.display_value(t.coeff);
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (t.mono.is_one()) {
      os << c.get_str();
      continue;
    }
    if (c != 1) os << c.get_str() << '*';
    write_monomial(os, *f.ring(), t.mono);
  }
  return os.str();
}

}  // namespace detsing
