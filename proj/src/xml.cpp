#include "xml.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>

#include "ddoif/errors.hpp"

namespace ddoif::detail {

const std::string* XmlElement::attribute(std::string_view key) const noexcept {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

namespace {

struct Builder {
    XmlElement root;
    std::vector<XmlElement*> stack;
    bool have_root = false;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* b = static_cast<Builder*>(user);
    XmlElement el;
    el.name = name;
    for (const XML_Char** a = attrs; *a; a += 2) el.attributes.emplace_back(a[0], a[1]);
    if (b->stack.empty()) {
        b->root = std::move(el);
        b->have_root = true;
        b->stack.push_back(&b->root);
    } else {
        auto& kids = b->stack.back()->children;
        kids.push_back(std::move(el));
        b->stack.push_back(&kids.back());
    }
}

void on_end(void* user, const XML_Char*) {
    static_cast<Builder*>(user)->stack.pop_back();
}

void on_text(void* user, const XML_Char* s, int len) {
    auto* b = static_cast<Builder*>(user);
    if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
    void operator()(XML_Parser p) const noexcept { XML_ParserFree(p); }
};

}  // namespace

XmlElement parse_xml(std::string_view text) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(
        XML_ParserCreate("UTF-8"));
    if (!parser) throw Error("cannot allocate XML parser");
    Builder b;
    XML_SetUserData(parser.get(), &b);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);
    // The stack only points at open ancestors; appending to the innermost
    // element's children never moves them.
    const auto ok = XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE);
    if (ok != XML_STATUS_OK) {
        throw SyntaxError("XML syntax error at line " +
                          std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                          XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!b.have_root) throw SyntaxError("XML document has no root element");
    return std::move(b.root);
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default:
                // XML 1.0 has no way to carry the remaining C0 controls, escaped or not.
                if (static_cast<unsigned char>(c) < 0x20) {
                    throw StructureError("control character " +
                                         std::to_string(static_cast<int>(c)) +
                                         " cannot be written as XML");
                }
                out += c;
        }
    }
    return out;
}

bool is_xml_whitespace(std::string_view text) noexcept {
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

}  // namespace ddoif::detail
