#include "ddoif/descriptor.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <json.hpp>
#include <unordered_set>

#include "ddoif/errors.hpp"
#include "xml.hpp"

namespace ddoif {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Attribute make_attribute(std::string key, std::string value) {
    if (key.empty()) throw StructureError("attribute key is empty");
    return {std::move(key), std::move(value)};
}

// JSON

ItemDescriptor descriptor_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string("JSON syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw StructureError("descriptor must be an object");
    ItemDescriptor d;
    const auto classes = doc.find("classes");
    if (classes == doc.end()) throw StructureError("descriptor lacks \"classes\"");
    if (!classes->is_array()) throw StructureError("\"classes\" must be a list");
    for (const auto& c : *classes) {
        if (!c.is_string()) throw StructureError("class path must be text");
        d.classes.push_back(ClassPath::parse(c.get<std::string>()));
    }
    if (const auto attrs = doc.find("attributes"); attrs != doc.end() && !attrs->is_null()) {
        if (!attrs->is_array()) throw StructureError("\"attributes\" must be a list");
        for (const auto& a : *attrs) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string()) {
                throw StructureError("attribute must be a [key, value] pair of text");
            }
            d.attributes.push_back(make_attribute(a[0].get<std::string>(), a[1].get<std::string>()));
        }
    }
    if (const auto v = doc.find("dictionary_version"); v != doc.end() && !v->is_null()) {
        if (!v->is_string()) throw StructureError("\"dictionary_version\" must be text");
        d.dictionary_version = v->get<std::string>();
    }
    return d;
}

std::string descriptor_to_json(const ItemDescriptor& d) {
    ordered_json doc = ordered_json::object();
    if (d.dictionary_version) doc["dictionary_version"] = *d.dictionary_version;
    doc["classes"] = ordered_json::array();
    for (const auto& c : d.classes) doc["classes"].push_back(c.str());
    doc["attributes"] = ordered_json::array();
    for (const auto& a : d.attributes) doc["attributes"].push_back(ordered_json::array({a.key, a.value}));
    return doc.dump(2) + "\n";
}

// YAML

std::string scalar(const YAML::Node& n, const char* what) {
    if (!n.IsScalar()) throw StructureError(std::string(what) + " must be text");
    return n.Scalar();
}

ItemDescriptor descriptor_from_yaml(std::string_view text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw SyntaxError(std::string("YAML syntax error: ") + e.what());
    }
    if (!doc.IsMap()) throw StructureError("descriptor must be a mapping");
    ItemDescriptor d;
    const YAML::Node classes = doc["classes"];
    if (!classes) throw StructureError("descriptor lacks \"classes\"");
    if (!classes.IsNull()) {
        if (!classes.IsSequence()) throw StructureError("\"classes\" must be a list");
        for (const auto& c : classes) d.classes.push_back(ClassPath::parse(scalar(c, "class path")));
    }
    if (const YAML::Node attrs = doc["attributes"]; attrs && !attrs.IsNull()) {
        if (!attrs.IsSequence()) throw StructureError("\"attributes\" must be a list");
        for (const auto& a : attrs) {
            if (!a.IsSequence() || a.size() != 2) {
                throw StructureError("attribute must be a [key, value] pair");
            }
            d.attributes.push_back(make_attribute(scalar(a[0], "attribute key"),
                                                  scalar(a[1], "attribute value")));
        }
    }
    if (const YAML::Node v = doc["dictionary_version"]; v && !v.IsNull()) {
        d.dictionary_version = scalar(v, "dictionary_version");
    }
    return d;
}

std::string descriptor_to_yaml(const ItemDescriptor& d) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    if (d.dictionary_version) {
        out << YAML::Key << "dictionary_version" << YAML::Value << YAML::DoubleQuoted
            << *d.dictionary_version;
    }
    out << YAML::Key << "classes" << YAML::Value;
    if (d.classes.empty()) {
        out << YAML::Flow;
    }
    out << YAML::BeginSeq;
    for (const auto& c : d.classes) out << YAML::DoubleQuoted << c.str();
    out << YAML::EndSeq;
    out << YAML::Key << "attributes" << YAML::Value;
    if (d.attributes.empty()) {
        out << YAML::Flow;
    }
    out << YAML::BeginSeq;
    for (const auto& a : d.attributes) {
        out << YAML::Flow << YAML::BeginSeq << YAML::DoubleQuoted << a.key << YAML::DoubleQuoted
            << a.value << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

// XML

ItemDescriptor descriptor_from_xml(std::string_view text) {
    const detail::XmlElement root = detail::parse_xml(text);
    if (root.name != "descriptor") {
        throw StructureError("root element must be <descriptor>, found <" + root.name + ">");
    }
    ItemDescriptor d;
    if (const std::string* v = root.attribute("dictionary_version")) d.dictionary_version = *v;
    for (const auto& el : root.children) {
        if (el.name == "class") {
            d.classes.push_back(ClassPath::parse(el.text));
        } else if (el.name == "attribute") {
            const std::string* key = el.attribute("key");
            if (!key) throw StructureError("<attribute> lacks a key");
            d.attributes.push_back(make_attribute(*key, el.text));
        }
    }
    return d;
}

std::string descriptor_to_xml(const ItemDescriptor& d) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<descriptor";
    if (d.dictionary_version) {
        out += " dictionary_version=\"" + detail::xml_escape(*d.dictionary_version) + "\"";
    }
    if (d.classes.empty() && d.attributes.empty()) return out + "/>\n";
    out += ">\n";
    for (const auto& c : d.classes) out += "  <class>" + detail::xml_escape(c.str()) + "</class>\n";
    for (const auto& a : d.attributes) {
        out += "  <attribute key=\"" + detail::xml_escape(a.key) + "\">" +
               detail::xml_escape(a.value) + "</attribute>\n";
    }
    return out + "</descriptor>\n";
}

}  // namespace

ItemDescriptor parse_descriptor(std::string_view text, DocumentFormat format) {
    if (format == DocumentFormat::Auto) format = detect_format(text);
    try {
        switch (format) {
            case DocumentFormat::Json: return descriptor_from_json(text);
            case DocumentFormat::Xml: return descriptor_from_xml(text);
            default: return descriptor_from_yaml(text);
        }
    } catch (const YAML::Exception& e) {
        throw StructureError(std::string("malformed descriptor: ") + e.what());
    }
}

std::string serialize_descriptor(const ItemDescriptor& d, DocumentFormat format) {
    switch (format) {
        case DocumentFormat::Auto:
        case DocumentFormat::Json: return descriptor_to_json(d);
        case DocumentFormat::Yaml: return descriptor_to_yaml(d);
        case DocumentFormat::Xml: return descriptor_to_xml(d);
    }
    return descriptor_to_json(d);
}

// Validation

std::string Subject::to_string() const {
    switch (kind) {
        case Kind::Descriptor: return "Descriptor";
        case Kind::Class: return "ClassIndex " + std::to_string(index);
        case Kind::Attribute: return "AttributeIndex " + std::to_string(index);
    }
    return "?";
}

std::string_view to_string(ValidationCode c) noexcept {
    switch (c) {
        case ValidationCode::UnknownClass: return "UnknownClass";
        case ValidationCode::NonLeafClass: return "NonLeafClass";
        case ValidationCode::DuplicateKey: return "DuplicateKey";
        case ValidationCode::EmptyDescriptor: return "EmptyDescriptor";
        case ValidationCode::VersionMismatch: return "VersionMismatch";
    }
    return "?";
}

bool ValidationReport::ok() const noexcept {
    return std::none_of(findings.begin(), findings.end(),
                        [](const auto& f) { return f.severity == Severity::Error; });
}

std::size_t ValidationReport::count(ValidationCode c) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [c](const auto& f) { return f.code == c; }));
}

ValidationReport validate_descriptor(const ItemDescriptor& d, const Dictionary& dict) {
    ValidationReport r;
    auto add = [&r](Severity s, Subject subj, ValidationCode code, std::string msg) {
        r.findings.push_back({s, subj, code, std::move(msg)});
    };

    if (d.classes.empty()) {
        add(Severity::Warning, {}, ValidationCode::EmptyDescriptor, "descriptor lists no classes");
    }
    if (d.dictionary_version && *d.dictionary_version != dict.version) {
        add(Severity::Warning, {}, ValidationCode::VersionMismatch,
            "descriptor targets dictionary \"" + *d.dictionary_version + "\", validating against \"" +
                dict.version + "\"");
    }

    for (std::size_t i = 0; i < d.classes.size(); ++i) {
        const Subject subj{Subject::Kind::Class, i};
        const ClassPath& path = d.classes[i];
        try {
            const ClassNode& node = resolve_path(dict, path);
            if (!node.is_leaf()) {
                add(Severity::Warning, subj, ValidationCode::NonLeafClass,
                    "\"" + path.str() + "\" has subclasses; the item is typed at a coarse level");
            }
        } catch (const NotFound& e) {
            add(Severity::Error, subj, ValidationCode::UnknownClass,
                "unknown class \"" + path.str() + "\" (resolved prefix: \"" + e.resolved_prefix() +
                    "\")");
        }
    }

    std::unordered_set<std::string_view> keys;
    for (std::size_t j = 0; j < d.attributes.size(); ++j) {
        const auto& key = d.attributes[j].key;
        if (!keys.insert(key).second) {
            add(Severity::Warning, {Subject::Kind::Attribute, j}, ValidationCode::DuplicateKey,
                "attribute \"" + key + "\" repeats an earlier key");
        }
    }
    return r;
}

}  // namespace ddoif
