#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twiglearn/sample.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

class XmlError : public ParseError {
 public:
  XmlError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A document as a labeled tree. Elements become nodes labeled with their
/// name; every non-blank text run becomes a leaf labeled with the trimmed text.
struct XmlDocument {
  Tree tree;
  std::vector<std::pair<NodeId, Sign>> annotations;
};

XmlDocument read_xml(std::string_view text, std::string_view annot_attr = "annot");

enum class AnnotationMode { boolean, unary };

struct XmlOptions {
  AnnotationMode mode = AnnotationMode::unary;
  std::string annot_attr = "annot";
  // Sign of the whole document in Boolean mode.
  Sign document_sign = Sign::positive;
  std::optional<Label> virtual_root;
};

// Unary mode yields one decorated example per annotated node. Boolean mode
// yields the document itself and rejects in-document annotations.
SignedSample parse_xml(std::string_view text, const XmlOptions& options = {});

// Leaves whose label is a valid element name are written as empty elements,
// the others as text.
std::string write_xml(const Tree& t);

}  // namespace twiglearn
