#pragma once

// Item descriptor carried in a container's textual chunk, and its
// validation against a class dictionary.
//
// Canonical JSON form:
//   {"dictionary_version": "...", "classes": ["clothing/Dress", ...],
//    "attributes": [["colour", "navy"], ...]}

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddoif/container.hpp"
#include "ddoif/dictionary.hpp"
#include "ddoif/format.hpp"

namespace ddoif {

struct Attribute {
    std::string key;
    std::string value;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct ItemDescriptor {
    std::vector<ClassPath> classes;
    /// Repeated keys are allowed (multi-valued attributes).
    std::vector<Attribute> attributes;
    std::optional<std::string> dictionary_version;

    friend bool operator==(const ItemDescriptor&, const ItemDescriptor&) = default;
};

/// Throws SyntaxError, or StructureError when "classes" is missing, a path
/// is malformed, or an attribute key is empty.
ItemDescriptor parse_descriptor(std::string_view text, DocumentFormat format = DocumentFormat::Auto);

/// JSON is the canonical form written into new containers. XML output throws
/// StructureError for text holding control characters other than tab, CR, LF.
std::string serialize_descriptor(const ItemDescriptor& d,
                                 DocumentFormat format = DocumentFormat::Json);

struct Subject {
    enum class Kind { Descriptor, Class, Attribute };
    Kind kind = Kind::Descriptor;
    std::size_t index = 0;

    std::string to_string() const;

    friend bool operator==(const Subject&, const Subject&) = default;
};

enum class ValidationCode {
    UnknownClass,
    NonLeafClass,
    DuplicateKey,
    EmptyDescriptor,
    VersionMismatch,
};

std::string_view to_string(ValidationCode c) noexcept;

struct ValidationFinding {
    Severity severity;
    Subject subject;
    ValidationCode code;
    std::string message;

    friend bool operator==(const ValidationFinding&, const ValidationFinding&) = default;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;

    bool ok() const noexcept;
    std::size_t count(ValidationCode c) const noexcept;
};

/// Findings come out descriptor-level first, then per class, then per
/// attribute, each in document order.
ValidationReport validate_descriptor(const ItemDescriptor& d, const Dictionary& dict);

}  // namespace ddoif
