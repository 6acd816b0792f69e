#include "twiglearn/sample.hpp"

#include <sstream>

namespace twiglearn {

char sign_char(Sign s) { return s == Sign::positive ? '+' : '-'; }

Sign parse_sign(std::string_view text) {
  if (text == "+" || text == "positive" || text == "pos") return Sign::positive;
  if (text == "-" || text == "negative" || text == "neg") return Sign::negative;
  throw ParseError("unknown sign '" + std::string(text) + "'");
}

std::string SignedExample::key() const {
  return std::string(1, sign_char(sign)) + canonical_term(tree, selected);
}

bool SignedSample::add(SignedExample ex) {
  if (auto u = unary(); u && *u != ex.unary())
    throw std::invalid_argument("cannot mix Boolean and unary examples");
  if (ex.selected && *ex.selected == ex.tree.root())
    throw std::invalid_argument("the root cannot be selected");
  if (!keys_.insert(ex.key()).second) return false;
  examples_.push_back(std::move(ex));
  return true;
}

bool SignedSample::add(Tree t, Sign s) { return add(SignedExample{std::move(t), std::nullopt, s}); }

bool SignedSample::add(DecoratedTree t, Sign s) {
  return add(SignedExample{t.tree(), t.selected(), s});
}

void SignedSample::append(const SignedSample& other) {
  for (const auto& ex : other.examples()) add(ex);
}

std::optional<bool> SignedSample::unary() const {
  if (examples_.empty()) return std::nullopt;
  return examples_.front().unary();
}

std::vector<Tree> SignedSample::trees(Sign s) const {
  std::vector<Tree> out;
  for (const auto& ex : examples_)
    if (ex.sign == s) out.push_back(ex.tree);
  return out;
}

std::vector<DecoratedTree> SignedSample::decorated(Sign s) const {
  std::vector<DecoratedTree> out;
  for (const auto& ex : examples_)
    if (ex.sign == s) out.push_back(ex.decorated());
  return out;
}

std::size_t SignedSample::count(Sign s) const {
  std::size_t n = 0;
  for (const auto& ex : examples_) n += ex.sign == s;
  return n;
}

SignedSample parse_term_sample(std::string_view text, bool unary) {
  SignedSample out;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    Sign sign = Sign::positive;
    if ((line[first] == '+' || line[first] == '-') && first + 1 < line.size() &&
        (line[first + 1] == ' ' || line[first + 1] == '\t')) {
      sign = line[first] == '+' ? Sign::positive : Sign::negative;
      ++first;
    }
    try {
      auto body = std::string_view(line).substr(first);
      if (unary)
        out.add(parse_decorated(body), sign);
      else
        out.add(parse_tree(body), sign);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string write_term_sample(const SignedSample& sample) {
  std::string out;
  for (const auto& ex : sample.examples()) {
    out += sign_char(ex.sign);
    out += ' ';
    out += to_term(ex.tree, ex.selected);
    out += '\n';
  }
  return out;
}

}  // namespace twiglearn
