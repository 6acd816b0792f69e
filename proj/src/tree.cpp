#include "twiglearn/tree.hpp"

#include <algorithm>
#include <set>

#include "lexing.hpp"

namespace twiglearn {

Tree::Tree(Label root_label) {
  if (root_label.empty()) throw std::invalid_argument("empty label");
  labels_.push_back(std::move(root_label));
  parents_.push_back(kNoNode);
  children_.emplace_back();
}

NodeId Tree::add_child(NodeId parent, Label label) {
  if (parent >= size()) throw std::out_of_range("add_child: bad parent");
  if (label.empty()) throw std::invalid_argument("empty label");
  auto id = static_cast<NodeId>(size());
  labels_.push_back(std::move(label));
  parents_.push_back(parent);
  children_.emplace_back();
  children_[parent].push_back(id);
  return id;
}

std::size_t Tree::depth(NodeId n) const {
  std::size_t d = 0;
  for (NodeId p = parent(n); p != kNoNode; p = parent(p)) ++d;
  return d;
}

std::size_t Tree::height() const {
  std::vector<std::size_t> h(size(), 0);
  for (NodeId n = static_cast<NodeId>(size()); n-- > 1;)
    h[parents_[n]] = std::max(h[parents_[n]], h[n] + 1);
  return h[0];
}

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < size(); ++n)
    if (is_leaf(n)) out.push_back(n);
  return out;
}

std::vector<NodeId> Tree::ancestors_path(NodeId n) const {
  std::vector<NodeId> out;
  for (NodeId p = n; p != kNoNode; p = parent(p)) out.push_back(p);
  std::reverse(out.begin(), out.end());
  return out;
}

std::pair<Tree, std::vector<NodeId>> Tree::subtree(NodeId n) const {
  std::vector<NodeId> map(size(), kNoNode);
  Tree out(label(n));
  map[n] = 0;
  for (NodeId m = n + 1; m < size(); ++m) {
    NodeId p = parents_[m];
    if (map[p] != kNoNode) map[m] = out.add_child(map[p], labels_[m]);
  }
  return {std::move(out), std::move(map)};
}

DecoratedTree::DecoratedTree(Tree tree, NodeId selected)
    : tree_(std::move(tree)), selected_(selected) {
  if (selected_ >= tree_.size()) throw std::out_of_range("selected node out of range");
  if (selected_ == tree_.root()) throw std::invalid_argument("the root cannot be selected");
}

std::string to_string(const Word& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += '/';
    out += detail::quote_label(l);
  }
  return out;
}

bool canonical_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

const Word& canonical_min(std::span<const Word> words) {
  if (words.empty()) throw std::invalid_argument("canonical_min of an empty set");
  return *std::min_element(words.begin(), words.end(), canonical_less);
}

Word label_path(const Tree& t, NodeId n) {
  Word w;
  for (NodeId m : t.ancestors_path(n)) w.push_back(t.label(m));
  return w;
}

std::vector<Word> paths(const Tree& t) {
  std::set<Word> out;
  for (NodeId leaf : t.leaves()) out.insert(label_path(t, leaf));
  return {out.begin(), out.end()};
}

std::vector<Word> paths(std::span<const Tree> trees) {
  std::set<Word> out;
  for (const auto& t : trees)
    for (auto& w : paths(t)) out.insert(std::move(w));
  return {out.begin(), out.end()};
}

Word sel_path(const DecoratedTree& t) { return label_path(t.tree(), t.selected()); }

std::vector<Word> sel_paths(std::span<const DecoratedTree> sample) {
  std::set<Word> out;
  for (const auto& t : sample) out.insert(sel_path(t));
  return {out.begin(), out.end()};
}

Tree path_tree(const Word& w) {
  if (w.empty()) throw std::invalid_argument("empty word");
  Tree t(w.front());
  NodeId n = 0;
  for (std::size_t i = 1; i < w.size(); ++i) n = t.add_child(n, w[i]);
  return t;
}

Tree add_virtual_root(const Tree& t, const Label& label) {
  Tree out(label);
  std::vector<NodeId> map(t.size());
  map[0] = out.add_child(0, t.label(0));
  for (NodeId n = 1; n < t.size(); ++n) map[n] = out.add_child(map[t.parent(n)], t.label(n));
  return out;
}

DecoratedTree add_virtual_root(const DecoratedTree& t, const Label& label) {
  return DecoratedTree(add_virtual_root(t.tree(), label), t.selected() + 1);
}

namespace {

bool bare_term_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
         c != '!' && c != '"' && c != '\0';
}

std::string term_label(detail::Cursor& in) {
  in.skip_ws();
  if (in.peek() == '"') return in.quoted();
  std::string out;
  while (!in.done() && bare_term_char(in.peek())) {
    out += in.peek();
    in.advance();
  }
  if (out.empty()) in.fail("expected a label");
  return out;
}

void term_children(detail::Cursor& in, Tree& t, NodeId at, std::vector<NodeId>& marked) {
  in.skip_ws();
  if (in.consume("!")) marked.push_back(at);
  in.skip_ws();
  if (!in.consume("(")) return;
  do {
    NodeId c = t.add_child(at, term_label(in));
    term_children(in, t, c, marked);
    in.skip_ws();
  } while (in.consume(","));
  in.expect(")");
}

std::string render(const Tree& t, NodeId n, std::optional<NodeId> sel, bool sorted) {
  std::string out = detail::quote_label(t.label(n));
  if (sel == n) out += '!';
  if (t.is_leaf(n)) return out;
  std::vector<std::string> parts;
  for (NodeId c : t.children(n)) parts.push_back(render(t, c, sel, sorted));
  if (sorted) std::sort(parts.begin(), parts.end());
  out += '(';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

}  // namespace

ParsedTerm parse_term(std::string_view text) {
  detail::Cursor in(text);
  Tree t(term_label(in));
  std::vector<NodeId> marked;
  term_children(in, t, 0, marked);
  in.skip_ws();
  if (!in.done()) in.fail("trailing input");
  return {std::move(t), std::move(marked)};
}

Tree parse_tree(std::string_view text) {
  auto parsed = parse_term(text);
  if (!parsed.marked.empty()) throw ParseError("unexpected selection mark in a plain tree");
  return std::move(parsed.tree);
}

DecoratedTree parse_decorated(std::string_view text) {
  auto parsed = parse_term(text);
  if (parsed.marked.size() != 1) throw ParseError("a decorated tree needs exactly one '!' mark");
  if (parsed.marked[0] == 0) throw ParseError("the root cannot be selected");
  return DecoratedTree(std::move(parsed.tree), parsed.marked[0]);
}

std::string to_term(const Tree& t, std::optional<NodeId> selected) {
  return render(t, 0, selected, false);
}

std::string to_term(const DecoratedTree& t) { return to_term(t.tree(), t.selected()); }

std::string canonical_term(const Tree& t, std::optional<NodeId> selected) {
  return render(t, 0, selected, true);
}

std::string canonical_term(const DecoratedTree& t) {
  return canonical_term(t.tree(), t.selected());
}

bool tree_iso(const Tree& a, const Tree& b) {
  return a.size() == b.size() && canonical_term(a) == canonical_term(b);
}

}  // namespace twiglearn
