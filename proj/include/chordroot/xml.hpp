#pragma once

// Minimal element tree built with expat. Enough for MusicXML: element names,
// attributes, concatenated character data, ordered children.

#include <expat.h>

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chordroot/error.hpp"

namespace chordroot::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::vector<Element> children;

  const Element* child(std::string_view child_name) const {
    for (const Element& c : children)
      if (c.name == child_name) return &c;
    return nullptr;
  }

  bool has_child(std::string_view child_name) const { return child(child_name) != nullptr; }

  std::string_view attribute(std::string_view key, std::string_view fallback = {}) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return v;
    return fallback;
  }

  /// Trimmed text of a direct child, or empty.
  std::string child_text(std::string_view child_name) const {
    const Element* c = child(child_name);
    if (c == nullptr) return {};
    std::string_view t = c->text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return std::string(t);
  }
};

namespace detail {

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

struct BuildState {
  Element root;
  std::vector<Element*> stack;
};

inline void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* state = static_cast<BuildState*>(data);
  Element* target;
  if (state->stack.empty()) {
    target = &state->root;
  } else {
    state->stack.back()->children.emplace_back();
    target = &state->stack.back()->children.back();
  }
  target->name = name;
  for (int i = 0; attrs[i] != nullptr; i += 2) target->attributes.emplace_back(attrs[i], attrs[i + 1]);
  state->stack.push_back(target);
}

inline void on_end(void* data, const XML_Char*) { static_cast<BuildState*>(data)->stack.pop_back(); }

inline void on_text(void* data, const XML_Char* s, int len) {
  auto* state = static_cast<BuildState*>(data);
  if (!state->stack.empty()) state->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace detail

/// Parses a complete document. Throws ParseError with expat's message and line.
/// DOCTYPE declarations are accepted; external entities are never loaded.
inline Element parse(std::string_view bytes) {
  std::unique_ptr<XML_ParserStruct, detail::ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error("cannot allocate XML parser");
  detail::BuildState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), detail::on_start, detail::on_end);
  XML_SetCharacterDataHandler(parser.get(), detail::on_text);
  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                     static_cast<int>(XML_GetCurrentLineNumber(parser.get())));
  }
  if (state.root.name.empty()) throw ParseError("XML document has no root element");
  return std::move(state.root);
}

inline std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace chordroot::xml
