#pragma once

#include <optional>
#include <string_view>

namespace ddoif {

/// Text serializations shared by dictionary and descriptor documents.
enum class DocumentFormat { Auto, Yaml, Json, Xml };

/// First non-whitespace character decides: '<' is XML, '{' or '[' is JSON,
/// anything else (including an empty document) is YAML. A UTF-8 BOM is
/// skipped.
DocumentFormat detect_format(std::string_view text) noexcept;

/// "yaml"/"yml", "json", "xml" (case-insensitive).
std::optional<DocumentFormat> format_from_name(std::string_view name) noexcept;

std::string_view to_string(DocumentFormat f) noexcept;

}  // namespace ddoif
