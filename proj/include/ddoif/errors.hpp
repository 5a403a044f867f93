#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddoif {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Document-level errors (dictionary and descriptor parsing).

class SyntaxError : public Error {
public:
    using Error::Error;
};

class StructureError : public Error {
public:
    using Error::Error;
};

class DuplicateSiblingError : public StructureError {
public:
    DuplicateSiblingError(std::string path, std::string name)
        : StructureError("duplicate sibling \"" + name + "\" under \"" + path + "\""),
          parent_path_(std::move(path)), name_(std::move(name)) {}

    const std::string& parent_path() const noexcept { return parent_path_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string parent_path_;
    std::string name_;
};

class NotFound : public Error {
public:
    NotFound(std::string requested, std::string resolved_prefix)
        : Error("class path \"" + requested + "\" not found (resolved prefix: \"" +
                resolved_prefix + "\")"),
          requested_(std::move(requested)), resolved_prefix_(std::move(resolved_prefix)) {}

    const std::string& requested() const noexcept { return requested_; }
    /// Deepest prefix of the requested path that did resolve; empty when
    /// not even the root matched.
    const std::string& resolved_prefix() const noexcept { return resolved_prefix_; }

private:
    std::string requested_;
    std::string resolved_prefix_;
};

// Container codec errors.

enum class Field {
    Signature,
    Reserved,
    DescriptorLength,
    Descriptor,
    MediaFormat,
    MediaLength,
    MediaBuffer,
    MediaCrc,
};

std::string_view to_string(Field f) noexcept;

/// What a damaged signature most likely went through in transit.
enum class Mangling {
    None,             // not recognisably a mangled DDOIF signature
    CrlfToLf,         // DOS to Unix line-ending conversion
    LfToCrlf,         // Unix to DOS line-ending conversion
    HighBitStripped,  // 7-bit channel cleared bit 7
};

std::string_view to_string(Mangling m) noexcept;

enum class DecodeCode {
    MagicMismatch,
    Truncated,
    CrcMismatch,
    TextEncoding,
    TrailingGarbage,
    InvalidFormatName,
};

std::string_view to_string(DecodeCode c) noexcept;

class DecodeError : public Error {
public:
    DecodeError(DecodeCode code, std::uint64_t offset, std::string message)
        : Error(std::move(message)), code_(code), offset_(offset) {}

    DecodeCode code() const noexcept { return code_; }
    /// Absolute byte offset where the failing field starts.
    std::uint64_t offset() const noexcept { return offset_; }

    std::optional<Field> field;
    std::optional<std::size_t> media_index;
    Mangling mangling = Mangling::None;
    std::uint32_t stored_crc = 0;
    std::uint32_t computed_crc = 0;

private:
    DecodeCode code_;
    std::uint64_t offset_;
};

enum class EncodeCode {
    SizeOverflow,
    InvalidFormatName,
};

class EncodeError : public Error {
public:
    EncodeError(EncodeCode code, std::string message)
        : Error(std::move(message)), code_(code) {}

    EncodeCode code() const noexcept { return code_; }

private:
    EncodeCode code_;
};

}  // namespace ddoif
