#include "domain_xml.hpp"

#include <stdexcept>

namespace stpatc::detail {

long long attr_ll(const xml::Node& n, std::string_view key, const std::string& path) {
  const std::string& raw = n.need(key, path);
  try {
    std::size_t used = 0;
    long long v = std::stoll(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(path, "attribute '" + std::string(key) + "' is not an integer");
  }
}

double attr_num(const xml::Node& n, std::string_view key, const std::string& path) {
  const std::string& raw = n.need(key, path);
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(path, "attribute '" + std::string(key) + "' is not a number");
  }
}

std::string shortest_decimal(double v) {
  if (v == static_cast<long long>(v)) return std::to_string(static_cast<long long>(v));
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Domain parse_domain(const xml::Node& v, const std::string& path) {
  const std::string& type = v.need("type", path);
  if (type == "bool") return Domain::boolean();
  if (type == "enum") {
    std::vector<std::string> values;
    for (const xml::Node* val : v.all("value")) values.push_back(val->text);
    return Domain::enumeration(std::move(values));
  }
  if (type == "int") return Domain::integer(attr_ll(v, "min", path), attr_ll(v, "max", path));
  if (type == "real") {
    Domain d = Domain::real(attr_num(v, "min", path), attr_num(v, "max", path),
                            static_cast<int>(attr_ll(v, "scale", path)));
    for (const xml::Node* val : v.all("value")) d.values.push_back(val->text);
    return d;
  }
  throw SchemaError(path, "unknown variable type '" + type + "'");
}

void write_domain(const Domain& d, xml::Node& out) {
  switch (d.kind) {
    case DomainKind::Bool:
      out.attrs.emplace_back("type", "bool");
      break;
    case DomainKind::Enum:
      out.attrs.emplace_back("type", "enum");
      break;
    case DomainKind::Int:
      out.attrs.emplace_back("type", "int");
      out.attrs.emplace_back("min", std::to_string(d.imin));
      out.attrs.emplace_back("max", std::to_string(d.imax));
      break;
    case DomainKind::Real:
      out.attrs.emplace_back("type", "real");
      out.attrs.emplace_back("min", shortest_decimal(d.rmin));
      out.attrs.emplace_back("max", shortest_decimal(d.rmax));
      out.attrs.emplace_back("scale", std::to_string(d.scale));
      break;
  }
  if (d.kind == DomainKind::Enum || d.kind == DomainKind::Real)
    for (const std::string& val : d.values) {
      xml::Node& vn = out.children.emplace_back();
      vn.name = "value";
      vn.text = val;
    }
}

}  // namespace stpatc::detail
