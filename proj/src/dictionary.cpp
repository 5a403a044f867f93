#include "ddoif/dictionary.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "ddoif/errors.hpp"

namespace ddoif {

// ClassPath

ClassPath ClassPath::parse(std::string_view text) {
    if (text.empty()) throw StructureError("empty class path");
    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        const std::size_t slash = text.find('/', start);
        const std::string_view seg = text.substr(start, slash == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : slash - start);
        if (seg.empty()) {
            throw StructureError("class path \"" + std::string(text) + "\" has an empty segment");
        }
        segments.emplace_back(seg);
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return ClassPath(std::move(segments));
}

ClassPath ClassPath::child(std::string name) const {
    ClassPath p = *this;
    p.segments_.push_back(std::move(name));
    return p;
}

std::string ClassPath::str() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i) out += '/';
        out += segments_[i];
    }
    return out;
}

std::size_t subtree_size(const ClassNode& node) noexcept {
    std::size_t n = 1;
    for (const auto& c : node.children) n += subtree_size(c);
    return n;
}

std::size_t Dictionary::size() const noexcept {
    std::size_t n = 0;
    for (const auto& r : roots) n += subtree_size(r);
    return n;
}

// Lookup

namespace {

const ClassNode* find_child(const std::vector<ClassNode>& level, std::string_view name) noexcept {
    const auto it = std::find_if(level.begin(), level.end(),
                                 [&](const ClassNode& n) { return n.name == name; });
    return it == level.end() ? nullptr : &*it;
}

}  // namespace

const ClassNode* find_path(const Dictionary& d, const ClassPath& path) noexcept {
    const std::vector<ClassNode>* level = &d.roots;
    const ClassNode* node = nullptr;
    for (const auto& seg : path.segments()) {
        node = find_child(*level, seg);
        if (!node) return nullptr;
        level = &node->children;
    }
    return node;
}

const ClassNode& resolve_path(const Dictionary& d, const ClassPath& path) {
    if (path.empty()) throw NotFound("", "");
    const std::vector<ClassNode>* level = &d.roots;
    const ClassNode* node = nullptr;
    ClassPath resolved;
    for (const auto& seg : path.segments()) {
        node = find_child(*level, seg);
        if (!node) throw NotFound(path.str(), resolved.str());
        resolved = resolved.child(seg);
        level = &node->children;
    }
    return *node;
}

std::vector<ClassPath> enumerate_paths(const Dictionary& d) {
    std::vector<ClassPath> out;
    out.reserve(d.size());
    struct Walk {
        std::vector<ClassPath>& out;
        void operator()(const ClassNode& n, const ClassPath& parent) {
            ClassPath here = parent.child(n.name);
            out.push_back(here);
            for (const auto& c : n.children) (*this)(c, here);
        }
    } walk{out};
    for (const auto& r : d.roots) walk(r, ClassPath{});
    return out;
}

// Lint

std::string_view to_string(LintRule r) noexcept {
    switch (r) {
        case LintRule::RootNotLowercase: return "RootNotLowercase";
        case LintRule::SubclassNotCapitalized: return "SubclassNotCapitalized";
        case LintRule::DuplicateSibling: return "DuplicateSibling";
        case LintRule::EmptyName: return "EmptyName";
        case LintRule::IllegalCharacter: return "IllegalCharacter";
    }
    return "?";
}

namespace {

bool is_ascii_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }
bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }

bool has_illegal_char(std::string_view name) noexcept {
    return std::any_of(name.begin(), name.end(), [](char ch) {
        const auto c = static_cast<unsigned char>(ch);
        return c == '/' || c < 0x20 || c == 0x7F;
    });
}

// Every blank-separated word must not start with a lowercase letter.
// Hyphenated compounds are one word, so "A-line" passes.
bool words_capitalized(std::string_view name) noexcept {
    bool word_start = true;
    for (char c : name) {
        if (is_blank(c)) {
            word_start = true;
            continue;
        }
        if (word_start && is_ascii_lower(c)) return false;
        word_start = false;
    }
    return true;
}

class Linter {
public:
    std::vector<LintViolation> out;

    void level(const std::vector<ClassNode>& nodes, const ClassPath& parent, bool roots) {
        std::unordered_set<std::string_view> seen;
        for (const auto& n : nodes) {
            const ClassPath here = parent.child(n.name);
            if (!seen.insert(n.name).second) {
                add(here, LintRule::DuplicateSibling,
                    "\"" + n.name + "\" repeats an earlier sibling name");
            }
            check_name(n.name, here, roots);
            level(n.children, here, false);
        }
    }

private:
    void check_name(const std::string& name, const ClassPath& here, bool root) {
        if (name.empty()) {
            add(here, LintRule::EmptyName, "class name is empty");
            return;
        }
        if (has_illegal_char(name)) {
            add(here, LintRule::IllegalCharacter,
                "\"" + name + "\" contains '/' or a control character");
        }
        if (root) {
            if (std::any_of(name.begin(), name.end(), is_ascii_upper)) {
                add(here, LintRule::RootNotLowercase,
                    "first-level class \"" + name + "\" must be lowercase");
            }
        } else if (!words_capitalized(name)) {
            add(here, LintRule::SubclassNotCapitalized,
                "subclass \"" + name + "\" must capitalize the first letter of each word");
        }
    }

    void add(const ClassPath& p, LintRule r, std::string msg) {
        out.push_back({p, r, std::move(msg)});
    }
};

}  // namespace

std::vector<LintViolation> lint_names(const Dictionary& d) {
    Linter l;
    l.level(d.roots, ClassPath{}, true);
    return std::move(l.out);
}

// Statistics

std::vector<ClassStat> class_stats(const Dictionary& d) {
    std::map<std::string, ClassStat> rows;
    struct Walk {
        std::map<std::string, ClassStat>& rows;
        std::size_t operator()(const ClassNode& n, std::size_t depth) {
            auto [it, fresh] = rows.try_emplace(n.name, ClassStat{n.name, 0, 0, depth});
            ++it->second.occurrences;
            std::size_t size = 1;
            for (const auto& c : n.children) size += (*this)(c, depth + 1);
            // `it` stays valid: std::map iterators survive insertion.
            if (fresh) it->second.subtree_size = size;
            return size;
        }
    } walk{rows};
    for (const auto& r : d.roots) walk(r, 1);

    std::vector<ClassStat> out;
    out.reserve(rows.size());
    for (auto& [_, s] : rows) out.push_back(std::move(s));
    std::stable_sort(out.begin(), out.end(), [](const ClassStat& a, const ClassStat& b) {
        return a.occurrences > b.occurrences;
    });
    return out;
}

// Merge

namespace {

std::vector<ClassNode> merge_level(const std::vector<ClassNode>& a, const std::vector<ClassNode>& b,
                                   const ClassPath& parent, std::vector<MergeConflict>& log) {
    std::vector<ClassNode> out;
    out.reserve(a.size() + b.size());
    for (const auto& na : a) {
        const ClassNode* nb = find_child(b, na.name);
        if (!nb) {
            out.push_back(na);
            continue;
        }
        const ClassPath here = parent.child(na.name);
        ClassNode merged;
        merged.name = na.name;
        merged.description = nb->description ? nb->description : na.description;
        if (na.description && nb->description && *na.description != *nb->description) {
            log.push_back({here, *nb->description, *na.description});
        }
        merged.children = merge_level(na.children, nb->children, here, log);
        out.push_back(std::move(merged));
    }
    for (const auto& nb : b) {
        if (!find_child(a, nb.name)) out.push_back(nb);
    }
    return out;
}

}  // namespace

MergeResult merge_dictionaries_logged(const Dictionary& a, const Dictionary& b) {
    MergeResult r;
    r.dictionary.version = b.version.empty() ? a.version : b.version;
    r.dictionary.roots = merge_level(a.roots, b.roots, ClassPath{}, r.log);
    return r;
}

Dictionary merge_dictionaries(const Dictionary& a, const Dictionary& b) {
    return merge_dictionaries_logged(a, b).dictionary;
}

// Seed

Dictionary seed_dictionary() {
    auto leaf = [](std::string name, std::string description = {}) {
        ClassNode n;
        n.name = std::move(name);
        if (!description.empty()) n.description = std::move(description);
        return n;
    };

    ClassNode dress = leaf("Dress", "One-piece garment covering the body and extending over the legs.");
    dress.children = {leaf("A-line Dress"), leaf("Apron Dress")};

    ClassNode clothing = leaf("clothing", "Garments worn on the body.");
    clothing.children = {std::move(dress), leaf("Skirt")};

    Dictionary d;
    d.version = "seed-0.1";
    d.roots = {
        std::move(clothing),
        leaf("material"),
        leaf("fabric"),
        leaf("post-processing"),
        leaf("footwear"),
        leaf("anatomy"),
    };
    return d;
}

}  // namespace ddoif
