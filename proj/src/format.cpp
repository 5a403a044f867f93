#include "ddoif/format.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace ddoif {

DocumentFormat detect_format(std::string_view text) noexcept {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    const auto it = std::find_if(text.begin(), text.end(), [](char c) {
        return !std::isspace(static_cast<unsigned char>(c));
    });
    if (it == text.end()) return DocumentFormat::Yaml;
    if (*it == '<') return DocumentFormat::Xml;
    if (*it == '{' || *it == '[') return DocumentFormat::Json;
    return DocumentFormat::Yaml;
}

std::optional<DocumentFormat> format_from_name(std::string_view name) noexcept {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "yaml" || lower == "yml") return DocumentFormat::Yaml;
    if (lower == "json") return DocumentFormat::Json;
    if (lower == "xml") return DocumentFormat::Xml;
    return std::nullopt;
}

std::string_view to_string(DocumentFormat f) noexcept {
    switch (f) {
        case DocumentFormat::Auto: return "auto";
        case DocumentFormat::Yaml: return "yaml";
        case DocumentFormat::Json: return "json";
        case DocumentFormat::Xml: return "xml";
    }
    return "?";
}

}  // namespace ddoif
