#pragma once

// Minimal XML tree for the dictionary and descriptor documents. Reading is
// backed by expat; writing escapes text so the reader returns it verbatim.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ddoif::detail {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlElement> children;
    /// Concatenated character data directly inside this element.
    std::string text;

    const std::string* attribute(std::string_view key) const noexcept;
};

/// Throws SyntaxError on malformed input.
XmlElement parse_xml(std::string_view text);

/// Escapes for use inside an attribute value or element content. Tab, CR
/// and LF become character references so attribute normalization and
/// line-end handling leave them intact. Other C0 controls throw
/// StructureError.
std::string xml_escape(std::string_view text);

bool is_xml_whitespace(std::string_view text) noexcept;

}  // namespace ddoif::detail
