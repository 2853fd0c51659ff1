#pragma once

// Minimal XML reader/writer for the project's own file dialects.
// Supported subset: elements, attributes, character data, comments.
// No namespaces, CDATA, processing instructions or DTDs.

#include <string>
#include <string_view>
#include <vector>

#include "stpatc/errors.hpp"

namespace stpatc::xml {

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;  // document order
  std::vector<Node> children;                              // document order
  std::string text;  // concatenated character data, trimmed

  const std::string* attr(std::string_view key) const;
  std::string attr_or(std::string_view key, std::string fallback) const;
  /// Required attribute; throws SchemaError naming `path` when absent.
  const std::string& need(std::string_view key, const std::string& path) const;
  const Node* child(std::string_view name) const;
  std::vector<const Node*> all(std::string_view name) const;
};

/// Parses a document and returns its root element.
Node parse(std::string_view input);

/// Canonical serialization: 2-space indent, attributes in stored order,
/// standard entity escaping. parse(write(n)) reproduces n.
std::string write(const Node& root);

std::string escape(std::string_view raw);

}  // namespace stpatc::xml
