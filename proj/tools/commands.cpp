#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ddoif/ddoif.hpp"

namespace fs = std::filesystem;

namespace ddoif::cli {
namespace {

/// Unreadable or unwritable path; maps to kUsage.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Bytes read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return data;
}

std::string read_text(const std::string& path) {
    const Bytes b = read_bytes(path);
    return std::string(b.begin(), b.end());
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string hex32(std::uint32_t v) {
    std::ostringstream s;
    s << "0x" << std::hex << std::uppercase << std::setw(8) << std::setfill('0') << v;
    return s.str();
}

// Extension to canonical format tag. "jpg" and "jpeg" stay distinct tags.
std::optional<std::string> tag_for_extension(const fs::path& p) {
    static const std::map<std::string, std::string> kTags = {
        {".jpg", "JPG"},   {".jpeg", "JPEG"}, {".png", "PNG"},   {".tif", "TIFF"},
        {".tiff", "TIFF"}, {".gif", "GIF"},   {".bmp", "BMP"},   {".webp", "WEBP"},
        {".heic", "HEIC"}, {".stl", "STL"},   {".obj", "OBJ"},   {".3ds", "3DS"},
        {".fbx", "FBX"},   {".glb", "GLB"},   {".gltf", "GLTF"}, {".ply", "PLY"},
        {".mp4", "MP4"},   {".mov", "MOV"},   {".avi", "AVI"},   {".webm", "WEBM"},
    };
    const auto it = kTags.find(lowercase(p.extension().string()));
    if (it == kTags.end()) return std::nullopt;
    return it->second;
}

void warn_extension(const std::string& path, std::ostream& err) {
    if (lowercase(fs::path(path).extension().string()) != ".ddof") {
        err << "warning: '" << path << "' does not use the .ddof extension\n";
    }
}

std::string describe(const DecodeError& e) {
    std::string msg = e.what();
    if (e.field) msg += " [field: " + std::string(to_string(*e.field)) + "]";
    return msg;
}

// pack

struct PackOptions {
    std::string descriptor;
    std::string output;
    std::vector<std::string> media;
    std::vector<std::string> formats;
};

int cmd_pack(const PackOptions& o, std::ostream& out, std::ostream& err) {
    std::map<std::size_t, std::string> overrides;
    for (const auto& spec : o.formats) {
        const auto at = spec.rfind('@');
        std::size_t index = 0;
        try {
            if (at == std::string::npos || at == 0) throw std::invalid_argument(spec);
            std::size_t used = 0;
            index = std::stoul(spec.substr(at + 1), &used);
            if (used != spec.size() - at - 1) throw std::invalid_argument(spec);
        } catch (const std::exception&) {
            err << "error: --format expects TAG@INDEX, got '" << spec << "'\n";
            return kUsage;
        }
        if (index >= o.media.size()) {
            err << "error: --format index " << index << " is out of range (" << o.media.size()
                << " media files)\n";
            return kUsage;
        }
        overrides[index] = spec.substr(0, at);
    }

    std::vector<FormatTag> tags;
    for (std::size_t i = 0; i < o.media.size(); ++i) {
        std::optional<std::string> name;
        if (const auto it = overrides.find(i); it != overrides.end()) {
            name = it->second;
        } else {
            name = tag_for_extension(o.media[i]);
        }
        if (!name) {
            err << "error: cannot infer the media format of '" << o.media[i]
                << "' from its extension; pass --format TAG@" << i << "\n";
            return kMalformed;
        }
        tags.push_back(FormatTag::from_string(*name));
    }

    const ItemDescriptor descriptor = parse_descriptor(read_text(o.descriptor));

    DdoifFile file;
    file.descriptor = serialize_descriptor(descriptor, DocumentFormat::Json);
    for (std::size_t i = 0; i < o.media.size(); ++i) {
        file = append_media(file, MediaChunk::make(tags[i], read_bytes(o.media[i])));
    }
    const Bytes encoded = encode_file(file);
    write_bytes(o.output, encoded);
    warn_extension(o.output, err);
    out << "packed " << o.output << ": " << file.media.size() << " media chunks, descriptor "
        << file.descriptor.size() << " bytes, " << encoded.size() << " bytes total\n";
    return kOk;
}

// unpack

int cmd_unpack(const std::string& input, const std::string& dir, std::ostream& out,
               std::ostream& err) {
    const Bytes bytes = read_bytes(input);
    DdoifFile file;
    try {
        file = decode_file(bytes);
    } catch (const DecodeError& e) {
        err << "error: " << input << ": " << describe(e) << "\n";
        return kMalformed;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());

    const fs::path base(dir);
    write_bytes(base / "descriptor.json",
                {reinterpret_cast<const std::uint8_t*>(file.descriptor.data()), file.descriptor.size()});
    for (std::size_t i = 0; i < file.media.size(); ++i) {
        const auto& m = file.media[i];
        write_bytes(base / ("media-" + std::to_string(i) + "." + lowercase(m.format.name())), m.buffer);
    }
    out << "unpacked " << file.media.size() << " media chunks and descriptor.json into " << dir
        << "\n";
    return kOk;
}

// inspect

int cmd_inspect(const std::string& input, bool as_json, std::ostream& out, std::ostream& err) {
    const Bytes bytes = read_bytes(input);
    const VerificationReport r = verify_file(bytes);
    if (!r.signature_ok) {
        err << "error: " << input << ": " << r.findings.front().message << "\n";
        return kMalformed;
    }

    const auto reserved = !r.reserved_zero ? "unknown" : (*r.reserved_zero ? "zero" : "nonzero");
    if (as_json) {
        nlohmann::ordered_json j;
        j["file"] = input;
        j["signature"] = "ok";
        j["reserved"] = reserved;
        j["descriptor_length"] = r.descriptor_length ? nlohmann::ordered_json(*r.descriptor_length)
                                                     : nlohmann::ordered_json(nullptr);
        j["media_count"] = r.chunks.size();
        j["media"] = nlohmann::ordered_json::array();
        for (const auto& c : r.chunks) {
            j["media"].push_back({{"index", c.index},
                                  {"tag", c.tag},
                                  {"length", c.length},
                                  {"crc", hex32(c.stored_crc)},
                                  {"offset", c.offset}});
        }
        j["findings"] = nlohmann::ordered_json::array();
        for (const auto& f : r.findings) {
            j["findings"].push_back({{"severity", to_string(f.severity)},
                                     {"location", f.location.to_string()},
                                     {"code", f.code},
                                     {"message", f.message}});
        }
        j["ok"] = r.ok();
        out << j.dump(2) << "\n";
    } else {
        out << "file: " << input << "\n";
        out << "signature: ok\n";
        out << "reserved: " << reserved << "\n";
        out << r.chunks.size() << " media chunks, descriptor ";
        if (r.descriptor_length) {
            out << *r.descriptor_length << " bytes\n";
        } else {
            out << "unreadable\n";
        }
        if (!r.chunks.empty()) {
            out << std::left << std::setw(7) << "index" << std::setw(10) << "tag" << std::setw(12)
                << "length" << std::setw(12) << "crc"
                << "offset\n";
            for (const auto& c : r.chunks) {
                out << std::left << std::setw(7) << c.index << std::setw(10) << c.tag << std::setw(12)
                    << c.length << std::setw(12) << hex32(c.stored_crc) << c.offset << "\n";
            }
        }
        if (r.findings.empty()) {
            out << "findings: none\n";
        } else {
            out << "findings:\n";
            for (const auto& f : r.findings) {
                out << "  " << to_string(f.severity) << " " << f.location.to_string() << " " << f.code
                    << ": " << f.message << "\n";
            }
        }
    }
    return r.ok() ? kOk : kFindings;
}

// validate

Dictionary load_dictionary(const std::string& path) { return parse_dictionary(read_text(path)); }

int cmd_validate(const std::string& input, const std::string& dict_path, bool seed,
                 std::ostream& out, std::ostream& err) {
    if (seed == !dict_path.empty()) {
        err << "error: validate needs exactly one of --dict PATH or --seed\n";
        return kUsage;
    }
    const Dictionary dict = seed ? seed_dictionary() : load_dictionary(dict_path);
    const Bytes bytes = read_bytes(input);
    const VerificationReport r = verify_file(bytes);
    if (!r.signature_ok) {
        err << "error: " << input << ": " << r.findings.front().message << "\n";
        return kMalformed;
    }

    out << "integrity:";
    if (r.findings.empty()) out << " ok";
    out << "\n";
    for (const auto& f : r.findings) {
        out << "  " << to_string(f.severity) << " " << f.location.to_string() << " " << f.code << ": "
            << f.message << "\n";
    }
    if (!r.ok()) {
        out << "descriptor: skipped (integrity errors)\n";
        return kFindings;
    }

    const DdoifFile file = decode_file(bytes);
    const ItemDescriptor d =
        file.descriptor.empty() ? ItemDescriptor{} : parse_descriptor(file.descriptor);
    const ValidationReport v = validate_descriptor(d, dict);
    out << "descriptor:";
    if (v.findings.empty()) out << " ok";
    out << "\n";
    for (const auto& f : v.findings) {
        out << "  " << to_string(f.severity) << " " << f.subject.to_string() << " "
            << to_string(f.code) << ": " << f.message << "\n";
    }
    return v.ok() ? kOk : kFindings;
}

// dict

int cmd_dict_lint(const std::string& path, std::ostream& out) {
    const auto violations = lint_names(load_dictionary(path));
    for (const auto& v : violations) {
        out << v.path.str() << ": " << to_string(v.rule) << ": " << v.message << "\n";
    }
    if (violations.empty()) out << "no violations\n";
    return violations.empty() ? kOk : kFindings;
}

int cmd_dict_stats(const std::string& path, std::size_t top, std::ostream& out) {
    auto stats = class_stats(load_dictionary(path));
    if (top > 0 && stats.size() > top) stats.resize(top);
    std::size_t width = 4;
    for (const auto& s : stats) width = std::max(width, s.name.size());
    out << std::left << std::setw(static_cast<int>(width + 2)) << "name" << std::setw(7) << "count"
        << std::setw(9) << "subtree"
        << "depth\n";
    for (const auto& s : stats) {
        out << std::left << std::setw(static_cast<int>(width + 2)) << s.name << std::setw(7)
            << s.occurrences << std::setw(9) << s.subtree_size << s.depth << "\n";
    }
    return kOk;
}

int cmd_dict_convert(const std::string& path, const std::string& to, const std::string& output,
                     std::ostream& out, std::ostream& err) {
    const auto format = format_from_name(to);
    if (!format) {
        err << "error: --to must be yaml, json or xml, got '" << to << "'\n";
        return kUsage;
    }
    const std::string text = serialize_dictionary(load_dictionary(path), *format);
    if (output.empty()) {
        out << text;
    } else {
        write_bytes(output, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pack, inspect and validate DDOIF fashion-item containers", "ddoif"};
    app.require_subcommand(1);

    PackOptions pack;
    auto* pack_cmd = app.add_subcommand("pack", "Build a .ddof file from a descriptor and media files");
    pack_cmd->add_option("-d,--descriptor", pack.descriptor, "Descriptor document (YAML/JSON/XML)")
        ->required();
    pack_cmd->add_option("-o,--output", pack.output, "Output .ddof path")->required();
    pack_cmd->add_option("--format", pack.formats, "Override a media tag: TAG@INDEX (0-based)");
    pack_cmd->add_option("media", pack.media, "Media files, stored in the given order");

    std::string unpack_in, unpack_dir;
    auto* unpack_cmd = app.add_subcommand("unpack", "Extract descriptor and media from a .ddof file");
    unpack_cmd->add_option("input", unpack_in, "Input .ddof file")->required();
    unpack_cmd->add_option("-o,--output", unpack_dir, "Output directory")->required();

    std::string inspect_in;
    bool inspect_json = false;
    auto* inspect_cmd = app.add_subcommand("inspect", "Show header, descriptor and media chunk layout");
    inspect_cmd->add_option("input", inspect_in, "Input .ddof file")->required();
    inspect_cmd->add_flag("--json", inspect_json, "Machine-readable output");

    std::string validate_in, validate_dict;
    bool validate_seed = false;
    auto* validate_cmd =
        app.add_subcommand("validate", "Check integrity and validate the descriptor against a dictionary");
    validate_cmd->add_option("input", validate_in, "Input .ddof file")->required();
    validate_cmd->add_option("--dict", validate_dict, "Dictionary file (YAML/JSON/XML)");
    validate_cmd->add_flag("--seed", validate_seed, "Use the built-in seed dictionary");

    auto* dict_cmd = app.add_subcommand("dict", "Dictionary tooling");
    dict_cmd->require_subcommand(1);
    std::string dict_path, dict_to, dict_out;
    std::size_t dict_top = 0;
    auto* lint_cmd = dict_cmd->add_subcommand("lint", "Check naming and uniqueness conventions");
    lint_cmd->add_option("path", dict_path, "Dictionary file")->required();
    auto* stats_cmd = dict_cmd->add_subcommand("stats", "Class name frequency table");
    stats_cmd->add_option("path", dict_path, "Dictionary file")->required();
    stats_cmd->add_option("--top", dict_top, "Only the K most frequent names");
    auto* convert_cmd = dict_cmd->add_subcommand("convert", "Rewrite in another serialization");
    convert_cmd->add_option("path", dict_path, "Dictionary file")->required();
    convert_cmd->add_option("--to", dict_to, "yaml, json or xml")->required();
    convert_cmd->add_option("-o,--output", dict_out, "Write here instead of standard output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*pack_cmd) return cmd_pack(pack, out, err);
        if (*unpack_cmd) return cmd_unpack(unpack_in, unpack_dir, out, err);
        if (*inspect_cmd) return cmd_inspect(inspect_in, inspect_json, out, err);
        if (*validate_cmd) return cmd_validate(validate_in, validate_dict, validate_seed, out, err);
        if (*lint_cmd) return cmd_dict_lint(dict_path, out);
        if (*stats_cmd) return cmd_dict_stats(dict_path, dict_top, out);
        if (*convert_cmd) return cmd_dict_convert(dict_path, dict_to, dict_out, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DecodeError& e) {
        err << "error: " << describe(e) << "\n";
        return kMalformed;
    } catch (const ddoif::Error& e) {
        err << "error: " << e.what() << "\n";
        return kMalformed;
    }
    return kUsage;
}

}  // namespace ddoif::cli
