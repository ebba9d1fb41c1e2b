#include "bargain/action.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace bargain {

std::string_view to_string(Verb v) {
  switch (v) {
    case Verb::Buy: return "BUY";
    case Verb::Sell: return "SELL";
    case Verb::Reject: return "REJECT";
    case Verb::Deal: return "DEAL";
    case Verb::Quit: return "QUIT";
  }
  return "?";
}

std::string_view to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::UnknownVerb: return "unknown_verb";
    case ParseErrorKind::MissingPrice: return "missing_price";
    case ParseErrorKind::MalformedPayload: return "malformed_payload";
    case ParseErrorKind::NoAction: return "no_action";
  }
  return "?";
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_codename_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

// Horizontal whitespace only: a payload never spans lines.
std::size_t skip_blanks(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

ParseError error(ParseErrorKind k, std::string detail) { return ParseError{k, std::move(detail)}; }

}  // namespace

ActionParse parse_action_prefix(std::string_view text, std::size_t& consumed) {
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  if (i >= text.size() || text[i] != '[') {
    return error(ParseErrorKind::UnknownVerb, "expected '[' to open an action verb");
  }
  const std::size_t close = text.find(']', i);
  if (close == std::string_view::npos) {
    return error(ParseErrorKind::UnknownVerb, "unterminated action verb");
  }
  const std::string_view word = text.substr(i + 1, close - i - 1);

  static constexpr std::array<std::pair<std::string_view, Verb>, 5> kVerbs = {{
      {"BUY", Verb::Buy},
      {"SELL", Verb::Sell},
      {"REJECT", Verb::Reject},
      {"DEAL", Verb::Deal},
      {"QUIT", Verb::Quit},
  }};
  std::optional<Verb> verb;
  for (const auto& [name, v] : kVerbs) {
    if (word == name) verb = v;
  }
  if (!verb) return error(ParseErrorKind::UnknownVerb, "unknown verb '" + std::string(word) + "'");

  i = close + 1;
  if (*verb == Verb::Reject || *verb == Verb::Quit) {
    consumed = i;
    return *verb == Verb::Reject ? Action::reject() : Action::quit();
  }

  i = skip_blanks(text, i);
  if (i >= text.size() || text[i] != '$') {
    return error(ParseErrorKind::MissingPrice,
                 "[" + std::string(word) + "] requires a '$' price and a (Nx codename) payload");
  }
  ++i;
  std::size_t end = i;
  while (end < text.size() && (is_digit(text[end]) || text[end] == ',' || text[end] == '.')) ++end;
  // A sentence-ending period is not part of the number.
  std::string_view number = text.substr(i, end - i);
  while (!number.empty() && (number.back() == '.' || number.back() == ',')) number.remove_suffix(1);
  if (number.empty()) return error(ParseErrorKind::MissingPrice, "no digits after '$'");
  const auto price = Money::parse(number);
  if (!price) return error(ParseErrorKind::MalformedPayload, "bad price '" + std::string(number) + "'");
  if (*price <= Money{}) return error(ParseErrorKind::MalformedPayload, "price must be positive");
  i += number.size();

  i = skip_blanks(text, i);
  if (i >= text.size() || text[i] != '(') {
    return error(ParseErrorKind::MalformedPayload, "expected '(' before quantity");
  }
  i = skip_blanks(text, i + 1);
  const std::size_t qty_start = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == qty_start || i - qty_start > 6) {
    return error(ParseErrorKind::MalformedPayload, "expected an integer quantity");
  }
  const int quantity = std::stoi(std::string(text.substr(qty_start, i - qty_start)));
  if (quantity <= 0) return error(ParseErrorKind::MalformedPayload, "quantity must be positive");
  if (i >= text.size() || text[i] != 'x') {
    return error(ParseErrorKind::MalformedPayload, "expected 'x' after quantity");
  }
  i = skip_blanks(text, i + 1);
  const std::size_t name_start = i;
  while (i < text.size() && is_codename_char(text[i])) ++i;
  if (i == name_start) return error(ParseErrorKind::MalformedPayload, "expected a codename");
  std::string codename(text.substr(name_start, i - name_start));
  i = skip_blanks(text, i);
  if (i >= text.size() || text[i] != ')') {
    return error(ParseErrorKind::MalformedPayload, "expected ')' after codename");
  }
  consumed = i + 1;

  Offer offer{*price, quantity, std::move(codename)};
  switch (*verb) {
    case Verb::Buy: return Action::buy(std::move(offer));
    case Verb::Sell: return Action::sell(std::move(offer));
    default: return Action::deal(std::move(offer));
  }
}

ActionParse parse_action(std::string_view text) {
  std::size_t consumed = 0;
  ActionParse result = parse_action_prefix(text, consumed);
  if (std::holds_alternative<ParseError>(result)) return result;
  for (std::size_t i = consumed; i < text.size(); ++i) {
    if (!is_space(text[i])) {
      return error(ParseErrorKind::MalformedPayload,
                   "unexpected trailing text '" + std::string(text.substr(i)) + "'");
    }
  }
  return result;
}

std::string render_action(const Action& a) {
  std::string out = "[";
  out += to_string(a.verb());
  out += ']';
  if (a.priced()) {
    const Offer& o = a.offer();
    out += " $" + o.price.to_string() + " (" + std::to_string(o.quantity) + "x " + o.codename + ")";
  }
  return out;
}

}  // namespace bargain
