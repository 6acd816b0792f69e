#include "twiglearn/xml.hpp"

#include <algorithm>
#include <cctype>

namespace twiglearn {

XmlError::XmlError(const std::string& what, std::size_t line, std::size_t column)
    : ParseError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) +
                 ")"),
      line_(line),
      column_(column) {}

namespace {

bool is_xml_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalpha(u) || c == '_';
}

bool name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return name_start(c) || std::isdigit(u) || c == '-' || c == '.' || c == ':';
}

bool valid_element_name(std::string_view s) {
  if (s.empty() || !name_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return name_char(c) && c != ':'; });
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_xml_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_xml_space(s.back())) s.remove_suffix(1);
  return s;
}

class Reader {
 public:
  Reader(std::string_view text, std::string_view annot_attr)
      : text_(text), annot_attr_(annot_attr) {}

  XmlDocument run() {
    starts_with("\xEF\xBB\xBF") && advance(3);
    skip_space();
    if (starts_with("<?xml") && (is_xml_space(peek(5)) || starts_with("<?xml?>"))) {
      auto end = text_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
    if (!starts_with("<")) fail("expected the document element");
    element(kNoNode);
    skip_misc();
    if (pos_ < text_.size()) fail("content after the document element");
    return {std::move(*tree_), std::move(annotations_)};
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  bool advance(std::size_t n) {
    pos_ += n;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw XmlError(what, line, column);
  }

  void skip_space() {
    while (pos_ < text_.size() && is_xml_space(text_[pos_])) ++pos_;
  }

  void skip_comment() {
    auto end = text_.find("-->", pos_ + 4);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  void reject_markup() {
    if (starts_with("<?")) fail("processing instructions are not supported");
    if (starts_with("<![CDATA[")) fail("CDATA sections are not supported");
    if (starts_with("<!DOCTYPE")) fail("document type declarations are not supported");
    if (starts_with("<!")) fail("unsupported markup declaration");
  }

  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("<?") || starts_with("<!")) reject_markup();
      return;
    }
  }

  std::string name() {
    if (!name_start(peek())) fail("expected a name");
    std::string out;
    while (name_char(peek())) out += text_[pos_++];
    return out;
  }

  void entity(std::string& out) {
    auto end = text_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("malformed entity reference");
    auto ref = text_.substr(pos_ + 1, end - pos_ - 1);
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
      bool hex = ref[1] == 'x';
      auto digits = std::string(ref.substr(hex ? 2 : 1));
      if (digits.empty()) fail("malformed character reference");
      std::size_t used = 0;
      unsigned long cp = 0;
      try {
        cp = std::stoul(digits, &used, hex ? 16 : 10);
      } catch (const std::exception&) {
        fail("malformed character reference");
      }
      if (used != digits.size() || cp == 0 || cp > 0x10FFFF) fail("malformed character reference");
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
    pos_ = end + 1;
  }

  std::string attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != quote) {
      if (text_[pos_] == '<') fail("'<' in attribute value");
      if (text_[pos_] == '&')
        entity(out);
      else
        out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  NodeId make_node(NodeId parent, std::string label) {
    if (parent == kNoNode) {
      tree_.emplace(std::move(label));
      return 0;
    }
    return tree_->add_child(parent, std::move(label));
  }

  void flush_text(NodeId parent, std::string& text) {
    auto t = trim(text);
    if (!t.empty()) make_node(parent, std::string(t));
    text.clear();
  }

  void element(NodeId parent) {
    ++pos_;
    std::string tag = name();
    if (tag.find(':') != std::string::npos) fail("namespaces are not supported");
    std::optional<Sign> annotation;
    for (;;) {
      bool spaced = pos_ < text_.size() && is_xml_space(peek());
      skip_space();
      if (starts_with("/>") || starts_with(">")) break;
      if (!spaced) fail("expected whitespace before an attribute");
      std::string attr = name();
      if (attr == "xmlns" || attr.find(':') != std::string::npos)
        fail("namespaces are not supported");
      skip_space();
      if (peek() != '=') fail("expected '='");
      ++pos_;
      skip_space();
      std::string value = attribute_value();
      if (attr == annot_attr_) {
        if (annotation) fail("duplicate annotation attribute");
        if (value == "+")
          annotation = Sign::positive;
        else if (value == "-")
          annotation = Sign::negative;
        else
          fail("annotation value must be '+' or '-'");
      }
    }
    NodeId node = make_node(parent, std::move(tag));
    if (annotation) annotations_.emplace_back(node, *annotation);
    if (starts_with("/>")) {
      pos_ += 2;
      return;
    }
    ++pos_;
    std::string text;
    for (;;) {
      if (pos_ >= text_.size()) fail("unterminated element <" + tree_->label(node) + ">");
      if (starts_with("</")) {
        flush_text(node, text);
        pos_ += 2;
        if (name() != tree_->label(node)) fail("mismatched closing tag");
        skip_space();
        if (peek() != '>') fail("expected '>'");
        ++pos_;
        return;
      }
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<?") || starts_with("<!")) {
        reject_markup();
      } else if (peek() == '<') {
        flush_text(node, text);
        element(node);
      } else if (peek() == '&') {
        entity(text);
      } else {
        text += text_[pos_++];
      }
    }
  }

  std::string_view text_;
  std::string_view annot_attr_;
  std::size_t pos_ = 0;
  std::optional<Tree> tree_;
  std::vector<std::pair<NodeId, Sign>> annotations_;
};

std::string escape_text(std::string_view s, bool in_attribute) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += in_attribute ? "&quot;" : "\""; break;
      default: out += c;
    }
  }
  return out;
}

void write_node(const Tree& t, NodeId n, std::string& out) {
  const auto& label = t.label(n);
  if (!valid_element_name(label)) {
    if (!t.is_leaf(n)) throw std::invalid_argument("inner label '" + label + "' is not an element name");
    if (trim(label) != label) throw std::invalid_argument("text label has surrounding whitespace");
    out += escape_text(label, false);
    return;
  }
  if (t.is_leaf(n)) {
    out += "<" + label + "/>";
    return;
  }
  out += "<" + label + ">";
  bool previous_text = false;
  for (NodeId c : t.children(n)) {
    bool text = !valid_element_name(t.label(c));
    if (text && previous_text) throw std::invalid_argument("adjacent text leaves cannot be written");
    write_node(t, c, out);
    previous_text = text;
  }
  out += "</" + label + ">";
}

}  // namespace

XmlDocument read_xml(std::string_view text, std::string_view annot_attr) {
  return Reader(text, annot_attr).run();
}

SignedSample parse_xml(std::string_view text, const XmlOptions& options) {
  auto doc = read_xml(text, options.annot_attr);
  SignedSample out;
  if (options.mode == AnnotationMode::boolean) {
    if (!doc.annotations.empty())
      throw ParseError("annotations are not allowed in Boolean mode; the sign comes from the caller");
    out.add(options.virtual_root ? add_virtual_root(doc.tree, *options.virtual_root) : doc.tree,
            options.document_sign);
    return out;
  }
  Tree tree = options.virtual_root ? add_virtual_root(doc.tree, *options.virtual_root) : doc.tree;
  NodeId shift = options.virtual_root ? 1 : 0;
  for (auto [node, sign] : doc.annotations) {
    if (node + shift == 0)
      throw ParseError("annotation on the document root requires a virtual root");
    out.add(DecoratedTree(tree, node + shift), sign);
  }
  return out;
}

std::string write_xml(const Tree& t) {
  if (!valid_element_name(t.label(0))) throw std::invalid_argument("root label is not an element name");
  std::string out;
  write_node(t, 0, out);
  return out;
}

}  // namespace twiglearn
