#pragma once

// Byte-exact reader/writer for .ddof containers.
//
// Layout (all integers unsigned big-endian):
//
//   0   signature   89 44 44 4F 49 46 0D 0A 1A 0A
//   10  reserved    16 bytes, written as zeros
//   26  N           descriptor length
//   30  descriptor  N bytes of UTF-8
//   then zero or more media chunks until end of input:
//       format tag  8 bytes, ASCII, zero padded
//       M           media buffer length
//       buffer      M bytes
//       crc         CRC-32 of buffer

#include <array>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddoif/errors.hpp"

namespace ddoif {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::array<std::uint8_t, 10> kSignature = {
    0x89, 0x44, 0x44, 0x4F, 0x49, 0x46, 0x0D, 0x0A, 0x1A, 0x0A};
inline constexpr std::size_t kSignatureSize = kSignature.size();
inline constexpr std::size_t kReservedSize = 16;
inline constexpr std::size_t kHeaderSize = kSignatureSize + kReservedSize;
inline constexpr std::size_t kFormatTagSize = 8;
/// Signature + reserved + descriptor length field.
inline constexpr std::size_t kMinimalFileSize = kHeaderSize + 4;
/// Tag + length + crc around each media buffer.
inline constexpr std::size_t kMediaOverhead = kFormatTagSize + 4 + 4;

/// Eight-byte media format name ("PNG", "JPEG", "3DS", ...).
///
/// Holds the raw field bytes so that a decoded file re-encodes bit for bit.
/// Comparison is case-insensitive on the text before the padding.
class FormatTag {
public:
    using Raw = std::array<std::uint8_t, kFormatTagSize>;

    FormatTag() = default;

    /// Canonical tag from text: 1-8 printable ASCII characters, uppercased.
    /// Throws EncodeError(InvalidFormatName) otherwise.
    static FormatTag from_string(std::string_view name);

    static FormatTag from_raw(const Raw& raw) noexcept {
        FormatTag t;
        t.raw_ = raw;
        return t;
    }

    const Raw& raw() const noexcept { return raw_; }

    /// Text before the first zero byte.
    std::string name() const;

    /// Non-empty printable ASCII prefix followed only by zero padding.
    bool valid() const noexcept;

    friend bool operator==(const FormatTag& a, const FormatTag& b) noexcept;

private:
    Raw raw_{};
};

struct FileHeader {
    std::array<std::uint8_t, kSignatureSize> signature = kSignature;
    std::array<std::uint8_t, kReservedSize> reserved{};

    bool reserved_is_zero() const noexcept;

    friend bool operator==(const FileHeader&, const FileHeader&) = default;
};

struct MediaChunk {
    FormatTag format;
    Bytes buffer;
    std::uint32_t crc = 0;

    /// Builds a chunk with its checksum computed from the buffer.
    static MediaChunk make(FormatTag format, Bytes buffer);

    friend bool operator==(const MediaChunk&, const MediaChunk&) = default;
};

struct DdoifFile {
    FileHeader header;
    /// Serialized item descriptor; empty means "no descriptor".
    std::string descriptor;
    std::vector<MediaChunk> media;

    friend bool operator==(const DdoifFile&, const DdoifFile&) = default;
};

/// Exact size encode_file will produce for `f`.
std::uint64_t encoded_size(const DdoifFile& f) noexcept;

/// Serializes `f`. Reserved bytes are always written as zeros and every
/// CRC is recomputed from its buffer.
Bytes encode_file(const DdoifFile& f);

/// Parses a complete container. Throws DecodeError on the first problem,
/// including a media CRC mismatch.
DdoifFile decode_file(std::span<const std::uint8_t> bytes);

/// Validates the signature and captures the reserved bytes verbatim.
/// Needs at least kHeaderSize bytes, otherwise throws Truncated.
FileHeader decode_header(std::span<const std::uint8_t> bytes);

/// Diagnoses a signature that does not match. Returns Mangling::None both
/// for a correct signature and for unrecognised garbage.
Mangling classify_signature(std::span<const std::uint8_t> prefix) noexcept;

/// Returns a copy of `f` with `m` appended; `m.crc` is recomputed.
DdoifFile append_media(const DdoifFile& f, MediaChunk m);

// Streaming access.

struct TextualChunk {
    std::string text;

    friend bool operator==(const TextualChunk&, const TextualChunk&) = default;
};

enum class ChunkKind { Text, Media };

struct ChunkEvent {
    ChunkKind kind;
    /// Absolute offset of the chunk's first byte (its length field or tag).
    std::uint64_t offset;
    std::variant<TextualChunk, MediaChunk> chunk;
};

/// Pulls chunks one at a time from a stream positioned at the start of a
/// .ddof file. Only the current chunk is held in memory. Each media chunk
/// is CRC-checked before it is handed out; errors are thrown as DecodeError
/// at the failing chunk.
///
/// The reader borrows the stream and must not outlive it.
class ChunkReader {
public:
    explicit ChunkReader(std::istream& in);

    /// Header read while producing the first event.
    const std::optional<FileHeader>& header() const noexcept { return header_; }

    /// Next chunk, or nullopt at a clean end of input.
    std::optional<ChunkEvent> next();

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = ChunkEvent;
        using difference_type = std::ptrdiff_t;
        using pointer = const ChunkEvent*;
        using reference = const ChunkEvent&;

        iterator() = default;
        explicit iterator(ChunkReader* reader) : reader_(reader) { advance(); }

        reference operator*() const { return *current_; }
        pointer operator->() const { return &*current_; }
        iterator& operator++() {
            advance();
            return *this;
        }
        void operator++(int) { advance(); }

        friend bool operator==(const iterator& a, const iterator& b) noexcept {
            return a.reader_ == b.reader_;
        }

    private:
        void advance() {
            current_.reset();  // release the previous chunk before reading the next
            current_ = reader_->next();
            if (!current_) reader_ = nullptr;
        }

        ChunkReader* reader_ = nullptr;
        std::optional<ChunkEvent> current_;
    };

    iterator begin() { return iterator(this); }
    iterator end() { return iterator(); }

private:
    std::istream* in_;
    std::uint64_t offset_ = 0;
    std::optional<std::uint64_t> stream_size_;
    std::optional<FileHeader> header_;
    bool text_done_ = false;
    std::size_t media_index_ = 0;
};

// Integrity audit.

enum class Severity { Error, Warning };

std::string_view to_string(Severity s) noexcept;

struct Location {
    enum class Kind { Header, Reserved, Text, Media };
    Kind kind = Kind::Header;
    std::size_t media_index = 0;

    static Location media(std::size_t i) noexcept { return {Kind::Media, i}; }

    std::string to_string() const;

    friend bool operator==(const Location&, const Location&) = default;
};

struct VerifyFinding {
    Severity severity;
    Location location;
    /// Stable identifier: a DecodeCode name, or "ReservedNonZero" /
    /// "EmptyMedia" for warnings.
    std::string code;
    std::string message;
    /// Offset of the offending field, when known.
    std::optional<std::uint64_t> offset;

    friend bool operator==(const VerifyFinding&, const VerifyFinding&) = default;
};

/// One media chunk as seen by verify_file, whether or not it checked out.
struct ChunkSummary {
    std::size_t index;
    std::string tag;
    std::uint32_t length;
    std::uint32_t stored_crc;
    std::uint32_t computed_crc;
    std::uint64_t offset;

    bool crc_ok() const noexcept { return stored_crc == computed_crc; }
};

struct VerificationReport {
    std::vector<VerifyFinding> findings;
    bool signature_ok = false;
    Mangling mangling = Mangling::None;
    std::optional<bool> reserved_zero;
    std::optional<std::uint32_t> descriptor_length;
    std::vector<ChunkSummary> chunks;

    bool ok() const noexcept;
    std::size_t error_count() const noexcept;
    std::size_t warning_count() const noexcept;
};

/// Audits `bytes` without throwing. After a bad CRC or tag, scanning
/// resumes at the next chunk boundary; framing errors end the scan.
VerificationReport verify_file(std::span<const std::uint8_t> bytes);

}  // namespace ddoif
