// YAML / JSON / XML forms of the class dictionary.
//
//   JSON: {"version": "...", "classes": [{"name": "...", "description": "...",
//          "children": [...]}]}
//   YAML: the same keys and nesting.
//   XML:  <dictionary version="..."><class name="..."><description>...</description>
//         <class .../></class></dictionary>

#include <yaml-cpp/yaml.h>

#include <json.hpp>
#include <unordered_set>

#include "ddoif/dictionary.hpp"
#include "ddoif/errors.hpp"
#include "xml.hpp"

namespace ddoif {
namespace {

constexpr std::size_t kMaxDepth = 1000;

std::optional<std::string> normalize_description(std::string text) {
    if (text.empty()) return std::nullopt;
    return text;
}

void check_level(const std::vector<ClassNode>& level, const ClassPath& parent) {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : level) {
        if (n.name.empty()) {
            throw StructureError("class under \"" + parent.str() + "\" has an empty name");
        }
        if (n.name.find('/') != std::string::npos) {
            throw StructureError("class name \"" + n.name + "\" contains the path separator '/'");
        }
        if (!seen.insert(n.name).second) throw DuplicateSiblingError(parent.str(), n.name);
        check_level(n.children, parent.child(n.name));
    }
}

// JSON

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ClassNode class_from_json(const json& j, std::size_t depth);

std::vector<ClassNode> classes_from_json(const json& arr, std::size_t depth) {
    if (!arr.is_array()) throw StructureError("\"classes\"/\"children\" must be a list");
    if (depth > kMaxDepth) throw StructureError("class tree nested too deeply");
    std::vector<ClassNode> out;
    out.reserve(arr.size());
    for (const auto& c : arr) out.push_back(class_from_json(c, depth));
    return out;
}

ClassNode class_from_json(const json& j, std::size_t depth) {
    if (!j.is_object()) throw StructureError("class entry must be an object");
    ClassNode n;
    const auto name = j.find("name");
    if (name == j.end() || !name->is_string()) throw StructureError("class entry lacks a name");
    n.name = name->get<std::string>();
    if (const auto d = j.find("description"); d != j.end() && !d->is_null()) {
        if (!d->is_string()) throw StructureError("description of \"" + n.name + "\" must be text");
        n.description = normalize_description(d->get<std::string>());
    }
    if (const auto c = j.find("children"); c != j.end() && !c->is_null()) {
        n.children = classes_from_json(*c, depth + 1);
    }
    return n;
}

Dictionary dictionary_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string("JSON syntax error: ") + e.what());
    }
    Dictionary d;
    if (doc.is_array()) {
        d.roots = classes_from_json(doc, 1);
        return d;
    }
    if (!doc.is_object()) throw StructureError("dictionary document must be an object or a list");
    if (const auto v = doc.find("version"); v != doc.end() && !v->is_null()) {
        if (!v->is_string()) throw StructureError("\"version\" must be text");
        d.version = v->get<std::string>();
    }
    if (const auto c = doc.find("classes"); c != doc.end() && !c->is_null()) {
        d.roots = classes_from_json(*c, 1);
    }
    return d;
}

ordered_json class_to_json(const ClassNode& n) {
    ordered_json j;
    j["name"] = n.name;
    if (n.description) j["description"] = *n.description;
    if (!n.children.empty()) {
        ordered_json kids = ordered_json::array();
        for (const auto& c : n.children) kids.push_back(class_to_json(c));
        j["children"] = std::move(kids);
    }
    return j;
}

std::string dictionary_to_json(const Dictionary& d) {
    ordered_json doc = ordered_json::object();
    if (!d.version.empty()) doc["version"] = d.version;
    if (!d.roots.empty()) {
        ordered_json classes = ordered_json::array();
        for (const auto& r : d.roots) classes.push_back(class_to_json(r));
        doc["classes"] = std::move(classes);
    }
    return doc.dump(2) + "\n";
}

// YAML

std::string yaml_text(const YAML::Node& n, const char* what) {
    if (!n.IsScalar()) throw StructureError(std::string(what) + " must be a scalar");
    return n.Scalar();
}

ClassNode class_from_yaml(const YAML::Node& n, std::vector<YAML::Node>& ancestors);

std::vector<ClassNode> classes_from_yaml(const YAML::Node& seq, std::vector<YAML::Node>& ancestors) {
    if (!seq.IsSequence()) throw StructureError("\"classes\"/\"children\" must be a list");
    if (ancestors.size() > kMaxDepth) throw StructureError("class tree nested too deeply");
    std::vector<ClassNode> out;
    out.reserve(seq.size());
    for (const auto& c : seq) out.push_back(class_from_yaml(c, ancestors));
    return out;
}

ClassNode class_from_yaml(const YAML::Node& n, std::vector<YAML::Node>& ancestors) {
    if (!n.IsMap()) throw StructureError("class entry must be a mapping");
    for (const auto& a : ancestors) {
        if (a.is(n)) throw StructureError("class entry refers to one of its own ancestors");
    }
    ClassNode out;
    const YAML::Node name = n["name"];
    if (!name || name.IsNull()) throw StructureError("class entry lacks a name");
    out.name = yaml_text(name, "name");
    if (const YAML::Node d = n["description"]; d && !d.IsNull()) {
        out.description = normalize_description(yaml_text(d, "description"));
    }
    if (const YAML::Node c = n["children"]; c && !c.IsNull()) {
        ancestors.push_back(n);
        out.children = classes_from_yaml(c, ancestors);
        ancestors.pop_back();
    }
    return out;
}

Dictionary dictionary_from_yaml(std::string_view text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw SyntaxError(std::string("YAML syntax error: ") + e.what());
    }
    Dictionary d;
    std::vector<YAML::Node> ancestors;
    try {
        if (!doc || doc.IsNull()) return d;
        if (doc.IsSequence()) {
            d.roots = classes_from_yaml(doc, ancestors);
            return d;
        }
        if (!doc.IsMap()) throw StructureError("dictionary document must be a mapping or a list");
        if (const YAML::Node v = doc["version"]; v && !v.IsNull()) d.version = yaml_text(v, "version");
        if (const YAML::Node c = doc["classes"]; c && !c.IsNull()) {
            d.roots = classes_from_yaml(c, ancestors);
        }
    } catch (const YAML::Exception& e) {
        throw StructureError(std::string("malformed dictionary: ") + e.what());
    }
    return d;
}

void class_to_yaml(YAML::Emitter& out, const ClassNode& n) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << n.name;
    if (n.description) {
        out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << *n.description;
    }
    if (!n.children.empty()) {
        out << YAML::Key << "children" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : n.children) class_to_yaml(out, c);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

std::string dictionary_to_yaml(const Dictionary& d) {
    YAML::Emitter out;
    if (d.version.empty() && d.roots.empty()) {
        out << YAML::Flow << YAML::BeginMap << YAML::EndMap;
    } else {
        out << YAML::BeginMap;
        if (!d.version.empty()) {
            out << YAML::Key << "version" << YAML::Value << YAML::DoubleQuoted << d.version;
        }
        if (!d.roots.empty()) {
            out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
            for (const auto& r : d.roots) class_to_yaml(out, r);
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    return std::string(out.c_str()) + "\n";
}

// XML

ClassNode class_from_xml(const detail::XmlElement& el, std::size_t depth) {
    if (depth > kMaxDepth) throw StructureError("class tree nested too deeply");
    ClassNode n;
    const std::string* name = el.attribute("name");
    if (!name) throw StructureError("<class> element lacks a name attribute");
    n.name = *name;
    for (const auto& child : el.children) {
        if (child.name == "description") {
            n.description = normalize_description(child.text);
        } else if (child.name == "class") {
            n.children.push_back(class_from_xml(child, depth + 1));
        }
    }
    return n;
}

Dictionary dictionary_from_xml(std::string_view text) {
    const detail::XmlElement root = detail::parse_xml(text);
    if (root.name != "dictionary") {
        throw StructureError("root element must be <dictionary>, found <" + root.name + ">");
    }
    Dictionary d;
    if (const std::string* v = root.attribute("version")) d.version = *v;
    for (const auto& child : root.children) {
        if (child.name == "class") d.roots.push_back(class_from_xml(child, 1));
    }
    return d;
}

void class_to_xml(std::string& out, const ClassNode& n, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    out += pad + "<class name=\"" + detail::xml_escape(n.name) + "\"";
    if (!n.description && n.children.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    if (n.description) {
        out += pad + "  <description>" + detail::xml_escape(*n.description) + "</description>\n";
    }
    for (const auto& c : n.children) class_to_xml(out, c, indent + 1);
    out += pad + "</class>\n";
}

std::string dictionary_to_xml(const Dictionary& d) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dictionary";
    if (!d.version.empty()) out += " version=\"" + detail::xml_escape(d.version) + "\"";
    if (d.roots.empty()) return out + "/>\n";
    out += ">\n";
    for (const auto& r : d.roots) class_to_xml(out, r, 1);
    return out + "</dictionary>\n";
}

}  // namespace

Dictionary parse_dictionary(std::string_view text, DocumentFormat format) {
    if (format == DocumentFormat::Auto) format = detect_format(text);
    Dictionary d;
    switch (format) {
        case DocumentFormat::Json: d = dictionary_from_json(text); break;
        case DocumentFormat::Xml: d = dictionary_from_xml(text); break;
        default: d = dictionary_from_yaml(text); break;
    }
    check_level(d.roots, ClassPath{});
    return d;
}

std::string serialize_dictionary(const Dictionary& d, DocumentFormat format) {
    switch (format) {
        case DocumentFormat::Json: return dictionary_to_json(d);
        case DocumentFormat::Xml: return dictionary_to_xml(d);
        case DocumentFormat::Yaml: return dictionary_to_yaml(d);
        case DocumentFormat::Auto: break;
    }
    throw std::invalid_argument("serialize_dictionary needs a concrete format");
}

}  // namespace ddoif
