#include "stpatc/xml.hpp"

#include <cctype>
#include <sstream>

namespace stpatc::xml {

const std::string* Node::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs)
    if (k == key) return &v;
  return nullptr;
}

std::string Node::attr_or(std::string_view key, std::string fallback) const {
  const std::string* v = attr(key);
  return v ? *v : std::move(fallback);
}

const std::string& Node::need(std::string_view key, const std::string& path) const {
  const std::string* v = attr(key);
  if (!v) throw SchemaError(path, "missing attribute '" + std::string(key) + "'");
  return *v;
}

const Node* Node::child(std::string_view name) const {
  for (const Node& c : children)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<const Node*> Node::all(std::string_view name) const {
  std::vector<const Node*> out;
  for (const Node& c : children)
    if (c.name == name) out.push_back(&c);
  return out;
}

namespace {

struct Cursor {
  std::string_view in;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError("offset " + std::to_string(pos), "xml: " + msg);
  }
  bool done() const { return pos >= in.size(); }
  char peek() const { return in[pos]; }
  bool starts(std::string_view s) const { return in.substr(pos, s.size()) == s; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
  }
  void expect(char c) {
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':';
}

std::string read_name(Cursor& c) {
  std::size_t start = c.pos;
  while (!c.done() && name_char(c.peek())) ++c.pos;
  if (c.pos == start) c.fail("expected name");
  return std::string(c.in.substr(start, c.pos - start));
}

std::string unescape(Cursor& c, std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    std::size_t end = raw.find(';', i);
    if (end == std::string_view::npos) c.fail("unterminated entity");
    std::string_view ent = raw.substr(i + 1, end - i - 1);
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else c.fail("unknown entity '&" + std::string(ent) + ";'");
    i = end;
  }
  return out;
}

std::string trim(std::string s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void skip_misc(Cursor& c) {
  for (;;) {
    c.skip_ws();
    if (c.starts("<!--")) {
      std::size_t end = c.in.find("-->", c.pos);
      if (end == std::string_view::npos) c.fail("unterminated comment");
      c.pos = end + 3;
    } else if (c.starts("<?")) {
      std::size_t end = c.in.find("?>", c.pos);
      if (end == std::string_view::npos) c.fail("unterminated declaration");
      c.pos = end + 2;
    } else {
      return;
    }
  }
}

Node parse_element(Cursor& c) {
  c.expect('<');
  Node node;
  node.name = read_name(c);
  for (;;) {
    c.skip_ws();
    if (c.done()) c.fail("unterminated tag");
    if (c.starts("/>")) {
      c.pos += 2;
      return node;
    }
    if (c.peek() == '>') {
      ++c.pos;
      break;
    }
    std::string key = read_name(c);
    c.skip_ws();
    c.expect('=');
    c.skip_ws();
    char quote = c.done() ? '\0' : c.peek();
    if (quote != '"' && quote != '\'') c.fail("expected quoted attribute value");
    ++c.pos;
    std::size_t start = c.pos;
    while (!c.done() && c.peek() != quote) ++c.pos;
    if (c.done()) c.fail("unterminated attribute value");
    std::string value = unescape(c, c.in.substr(start, c.pos - start));
    ++c.pos;
    for (const auto& [k, v] : node.attrs)
      if (k == key) c.fail("duplicate attribute '" + key + "'");
    node.attrs.emplace_back(std::move(key), std::move(value));
  }
  // content
  std::string text;
  for (;;) {
    if (c.done()) c.fail("unterminated element <" + node.name + ">");
    if (c.starts("<!--")) {
      std::size_t end = c.in.find("-->", c.pos);
      if (end == std::string_view::npos) c.fail("unterminated comment");
      c.pos = end + 3;
    } else if (c.starts("</")) {
      c.pos += 2;
      std::string closing = read_name(c);
      if (closing != node.name)
        c.fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
      c.skip_ws();
      c.expect('>');
      node.text = trim(std::move(text));
      return node;
    } else if (c.peek() == '<') {
      node.children.push_back(parse_element(c));
    } else {
      std::size_t start = c.pos;
      while (!c.done() && c.peek() != '<') ++c.pos;
      text += unescape(c, c.in.substr(start, c.pos - start));
    }
  }
}

void write_node(const Node& n, int depth, std::ostringstream& out) {
  std::string indent(2 * static_cast<std::size_t>(depth), ' ');
  out << indent << '<' << n.name;
  for (const auto& [k, v] : n.attrs) out << ' ' << k << "=\"" << escape(v) << '"';
  if (n.children.empty() && n.text.empty()) {
    out << "/>\n";
    return;
  }
  out << '>';
  if (n.children.empty()) {
    out << escape(n.text) << "</" << n.name << ">\n";
    return;
  }
  out << '\n';
  if (!n.text.empty()) out << indent << "  " << escape(n.text) << '\n';
  for (const Node& c : n.children) write_node(c, depth + 1, out);
  out << indent << "</" << n.name << ">\n";
}

}  // namespace

Node parse(std::string_view input) {
  Cursor c{input};
  skip_misc(c);
  if (c.done() || c.peek() != '<') c.fail("expected root element");
  Node root = parse_element(c);
  skip_misc(c);
  if (!c.done()) c.fail("trailing content after root element");
  return root;
}

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string write(const Node& root) {
  std::ostringstream out;
  write_node(root, 0, out);
  return out.str();
}

}  // namespace stpatc::xml
