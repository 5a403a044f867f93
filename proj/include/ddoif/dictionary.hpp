#pragma once

// Hierarchical class vocabulary: first-level classes are lowercase
// ("clothing"), every deeper level capitalizes each word ("A-line Dress").

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddoif/format.hpp"

namespace ddoif {

struct ClassNode {
    std::string name;
    /// Absent and empty are the same thing; both are stored as nullopt.
    std::optional<std::string> description;
    std::vector<ClassNode> children;

    bool is_leaf() const noexcept { return children.empty(); }

    friend bool operator==(const ClassNode&, const ClassNode&) = default;
};

struct Dictionary {
    std::vector<ClassNode> roots;
    std::string version;

    /// Total number of nodes.
    std::size_t size() const noexcept;

    friend bool operator==(const Dictionary&, const Dictionary&) = default;
};

/// Route from a root to a node, written "clothing/Dress/A-line Dress".
class ClassPath {
public:
    ClassPath() = default;
    explicit ClassPath(std::vector<std::string> segments) : segments_(std::move(segments)) {}

    /// Splits on '/'. Throws StructureError for an empty path or an empty
    /// segment.
    static ClassPath parse(std::string_view text);

    const std::vector<std::string>& segments() const noexcept { return segments_; }
    bool empty() const noexcept { return segments_.empty(); }
    std::size_t depth() const noexcept { return segments_.size(); }

    ClassPath child(std::string name) const;
    std::string str() const;

    friend bool operator==(const ClassPath&, const ClassPath&) = default;

private:
    std::vector<std::string> segments_;
};

enum class LintRule {
    RootNotLowercase,
    SubclassNotCapitalized,
    DuplicateSibling,
    EmptyName,
    IllegalCharacter,
};

std::string_view to_string(LintRule r) noexcept;

struct LintViolation {
    ClassPath path;
    LintRule rule;
    std::string message;
};

struct ClassStat {
    std::string name;
    /// Number of nodes carrying this name anywhere in the tree.
    std::size_t occurrences;
    /// Nodes in the subtree of the first occurrence (depth-first), self included.
    std::size_t subtree_size;
    /// Level of the first occurrence; roots are level 1.
    std::size_t depth;

    friend bool operator==(const ClassStat&, const ClassStat&) = default;
};

struct MergeConflict {
    ClassPath path;
    std::string kept;      // description taken from the second dictionary
    std::string replaced;  // description dropped from the first
};

struct MergeResult {
    Dictionary dictionary;
    std::vector<MergeConflict> log;
};

// Parsing and serialization. Throws SyntaxError, StructureError or
// DuplicateSiblingError. Naming-convention problems are left to lint_names.
// XML output throws StructureError for names or text with control characters.
Dictionary parse_dictionary(std::string_view text, DocumentFormat format = DocumentFormat::Auto);
std::string serialize_dictionary(const Dictionary& d, DocumentFormat format);

/// Throws NotFound carrying the deepest prefix that resolved.
const ClassNode& resolve_path(const Dictionary& d, const ClassPath& path);
const ClassNode* find_path(const Dictionary& d, const ClassPath& path) noexcept;

/// Every node path in depth-first preorder.
std::vector<ClassPath> enumerate_paths(const Dictionary& d);

/// Depth-first list of naming and uniqueness violations.
std::vector<LintViolation> lint_names(const Dictionary& d);

/// One row per distinct name, most frequent first, ties by name.
std::vector<ClassStat> class_stats(const Dictionary& d);

/// Number of nodes in `node`'s subtree, `node` included.
std::size_t subtree_size(const ClassNode& node) noexcept;

/// Union of two trees. Same-path nodes merge with `b`'s description
/// winning; nodes only in `b` follow `a`'s children in `b`'s order.
Dictionary merge_dictionaries(const Dictionary& a, const Dictionary& b);
MergeResult merge_dictionaries_logged(const Dictionary& a, const Dictionary& b);

/// Built-in dictionary holding the classes named in the protocol's
/// reference material.
Dictionary seed_dictionary();

}  // namespace ddoif
