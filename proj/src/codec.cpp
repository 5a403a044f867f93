#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <limits>

#include "ddoif/container.hpp"
#include "ddoif/crc32.hpp"
#include "framing.hpp"
#include "utf8.hpp"

namespace ddoif {

std::string_view to_string(Field f) noexcept {
    switch (f) {
        case Field::Signature: return "signature";
        case Field::Reserved: return "reserved bytes";
        case Field::DescriptorLength: return "descriptor length";
        case Field::Descriptor: return "descriptor";
        case Field::MediaFormat: return "media format name";
        case Field::MediaLength: return "media length";
        case Field::MediaBuffer: return "media buffer";
        case Field::MediaCrc: return "media CRC";
    }
    return "?";
}

std::string_view to_string(Mangling m) noexcept {
    switch (m) {
        case Mangling::None: return "unrecognised signature";
        case Mangling::CrlfToLf: return "DOS-to-Unix line-ending conversion (CRLF rewritten to LF)";
        case Mangling::LfToCrlf: return "Unix-to-DOS line-ending conversion (LF rewritten to CRLF)";
        case Mangling::HighBitStripped: return "7-bit channel corruption (high bit stripped)";
    }
    return "?";
}

std::string_view to_string(DecodeCode c) noexcept {
    switch (c) {
        case DecodeCode::MagicMismatch: return "MagicMismatch";
        case DecodeCode::Truncated: return "Truncated";
        case DecodeCode::CrcMismatch: return "CrcMismatch";
        case DecodeCode::TextEncoding: return "TextEncoding";
        case DecodeCode::TrailingGarbage: return "TrailingGarbage";
        case DecodeCode::InvalidFormatName: return "InvalidFormatName";
    }
    return "?";
}

// FormatTag

namespace {

bool printable_ascii(std::uint8_t c) noexcept { return c >= 0x20 && c <= 0x7E; }

std::uint8_t ascii_upper(std::uint8_t c) noexcept {
    return (c >= 'a' && c <= 'z') ? static_cast<std::uint8_t>(c - 'a' + 'A') : c;
}

std::size_t prefix_length(const FormatTag::Raw& raw) noexcept {
    return static_cast<std::size_t>(std::find(raw.begin(), raw.end(), 0) - raw.begin());
}

}  // namespace

FormatTag FormatTag::from_string(std::string_view name) {
    if (name.empty() || name.size() > kFormatTagSize) {
        throw EncodeError(EncodeCode::InvalidFormatName,
                          "format name \"" + std::string(name) + "\" must be 1-" +
                              std::to_string(kFormatTagSize) + " characters");
    }
    FormatTag t;
    for (std::size_t i = 0; i < name.size(); ++i) {
        const auto c = static_cast<std::uint8_t>(name[i]);
        if (!printable_ascii(c)) {
            throw EncodeError(EncodeCode::InvalidFormatName,
                              "format name \"" + std::string(name) +
                                  "\" contains a non-printable or non-ASCII byte");
        }
        t.raw_[i] = ascii_upper(c);
    }
    return t;
}

std::string FormatTag::name() const {
    return std::string(raw_.begin(), raw_.begin() + static_cast<std::ptrdiff_t>(prefix_length(raw_)));
}

bool FormatTag::valid() const noexcept {
    const std::size_t n = prefix_length(raw_);
    if (n == 0) return false;
    const auto pad = raw_.begin() + static_cast<std::ptrdiff_t>(n);
    return std::all_of(raw_.begin(), pad, printable_ascii) &&
           std::all_of(pad, raw_.end(), [](std::uint8_t b) { return b == 0; });
}

bool operator==(const FormatTag& a, const FormatTag& b) noexcept {
    for (std::size_t i = 0; i < kFormatTagSize; ++i) {
        if (ascii_upper(a.raw_[i]) != ascii_upper(b.raw_[i])) return false;
        if (a.raw_[i] == 0) break;
    }
    return true;
}

bool FileHeader::reserved_is_zero() const noexcept {
    return std::all_of(reserved.begin(), reserved.end(), [](std::uint8_t b) { return b == 0; });
}

MediaChunk MediaChunk::make(FormatTag format, Bytes buffer) {
    MediaChunk m{format, std::move(buffer), 0};
    m.crc = compute_crc32(m.buffer);
    return m;
}

// Error construction

namespace detail {

std::string hex32(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08X", v);
    return buf;
}

DecodeError truncated(Field field, std::uint64_t offset, std::optional<std::size_t> media_index) {
    std::string msg = "input truncated in " + std::string(to_string(field));
    if (media_index) msg += " of media index " + std::to_string(*media_index);
    msg += " at offset " + std::to_string(offset);
    DecodeError e(DecodeCode::Truncated, offset, std::move(msg));
    e.field = field;
    e.media_index = media_index;
    return e;
}

DecodeError magic_mismatch(std::span<const std::uint8_t> prefix) {
    const Mangling m = classify_signature(prefix);
    std::string msg = "not a DDOIF file: signature mismatch";
    if (m != Mangling::None) msg += ", likely " + std::string(to_string(m));
    DecodeError e(DecodeCode::MagicMismatch, 0, std::move(msg));
    e.field = Field::Signature;
    e.mangling = m;
    return e;
}

DecodeError crc_mismatch(std::size_t index, std::uint64_t offset, std::uint32_t stored,
                         std::uint32_t computed) {
    DecodeError e(DecodeCode::CrcMismatch, offset,
                  "CRC mismatch at media index " + std::to_string(index) + " (offset " +
                      std::to_string(offset) + "): stored " + hex32(stored) + ", computed " +
                      hex32(computed));
    e.field = Field::MediaCrc;
    e.media_index = index;
    e.stored_crc = stored;
    e.computed_crc = computed;
    return e;
}

DecodeError bad_format_name(std::size_t index, std::uint64_t offset, const FormatTag& /*tag*/) {
    DecodeError e(DecodeCode::InvalidFormatName, offset,
                  "invalid format name at media index " + std::to_string(index) + " (offset " +
                      std::to_string(offset) + ")");
    e.field = Field::MediaFormat;
    e.media_index = index;
    return e;
}

DecodeError bad_text_encoding(std::uint64_t offset) {
    DecodeError e(DecodeCode::TextEncoding, offset,
                  "descriptor at offset " + std::to_string(offset) + " is not valid UTF-8");
    e.field = Field::Descriptor;
    return e;
}

}  // namespace detail

// Signature diagnosis

namespace {

using Pattern = std::span<const std::uint8_t>;

constexpr std::uint8_t kCrlfToLf[] = {0x89, 0x44, 0x44, 0x4F, 0x49, 0x46, 0x0A, 0x1A, 0x0A};
// unix2dos-style: existing CRLF left alone, lone LF expanded.
constexpr std::uint8_t kLfToCrlf[] = {0x89, 0x44, 0x44, 0x4F, 0x49, 0x46,
                                      0x0D, 0x0A, 0x1A, 0x0D, 0x0A};
// Naive: every LF expanded, including the one in CRLF.
constexpr std::uint8_t kLfToCrlfNaive[] = {0x89, 0x44, 0x44, 0x4F, 0x49, 0x46,
                                           0x0D, 0x0D, 0x0A, 0x1A, 0x0D, 0x0A};
constexpr std::uint8_t kHighBitStripped[] = {0x09, 0x44, 0x44, 0x4F, 0x49,
                                             0x46, 0x0D, 0x0A, 0x1A, 0x0A};

bool starts_with(std::span<const std::uint8_t> bytes, Pattern p) noexcept {
    return bytes.size() >= p.size() && std::equal(p.begin(), p.end(), bytes.begin());
}

}  // namespace

Mangling classify_signature(std::span<const std::uint8_t> prefix) noexcept {
    if (starts_with(prefix, kSignature)) return Mangling::None;
    if (starts_with(prefix, kCrlfToLf)) return Mangling::CrlfToLf;
    if (starts_with(prefix, kLfToCrlf) || starts_with(prefix, kLfToCrlfNaive)) {
        return Mangling::LfToCrlf;
    }
    if (starts_with(prefix, kHighBitStripped)) return Mangling::HighBitStripped;
    return Mangling::None;
}

// Encoding

namespace {

std::uint32_t checked_length(std::size_t n, const char* what) {
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw EncodeError(EncodeCode::SizeOverflow,
                          std::string(what) + " of " + std::to_string(n) +
                              " bytes exceeds the 32-bit length field");
    }
    return static_cast<std::uint32_t>(n);
}

void check_chunk(const MediaChunk& m, std::size_t index) {
    if (!m.format.valid()) {
        throw EncodeError(EncodeCode::InvalidFormatName,
                          "media index " + std::to_string(index) + " has an invalid format name");
    }
    checked_length(m.buffer.size(), "media buffer");
}

void put_be32(Bytes& out, std::uint32_t v) {
    std::uint8_t b[4];
    detail::store_be32(b, v);
    out.insert(out.end(), b, b + 4);
}

}  // namespace

std::uint64_t encoded_size(const DdoifFile& f) noexcept {
    std::uint64_t n = kMinimalFileSize + f.descriptor.size();
    for (const auto& m : f.media) n += kMediaOverhead + m.buffer.size();
    return n;
}

Bytes encode_file(const DdoifFile& f) {
    const std::uint32_t text_len = checked_length(f.descriptor.size(), "descriptor");
    for (std::size_t i = 0; i < f.media.size(); ++i) check_chunk(f.media[i], i);

    Bytes out;
    out.reserve(static_cast<std::size_t>(encoded_size(f)));
    out.insert(out.end(), kSignature.begin(), kSignature.end());
    out.insert(out.end(), kReservedSize, 0);
    put_be32(out, text_len);
    out.insert(out.end(), f.descriptor.begin(), f.descriptor.end());
    for (const auto& m : f.media) {
        out.insert(out.end(), m.format.raw().begin(), m.format.raw().end());
        put_be32(out, static_cast<std::uint32_t>(m.buffer.size()));
        out.insert(out.end(), m.buffer.begin(), m.buffer.end());
        put_be32(out, compute_crc32(m.buffer));
    }
    return out;
}

DdoifFile append_media(const DdoifFile& f, MediaChunk m) {
    check_chunk(m, f.media.size());
    DdoifFile out = f;
    out.media.push_back(MediaChunk::make(m.format, std::move(m.buffer)));
    return out;
}

// Decoding

FileHeader decode_header(std::span<const std::uint8_t> bytes) {
    detail::SpanSource src(bytes);
    return detail::Framer(src).read_header();
}

DdoifFile decode_file(std::span<const std::uint8_t> bytes) {
    detail::SpanSource src(bytes);
    detail::Framer framer(src);
    DdoifFile f;
    f.header = framer.read_header();
    std::uint64_t text_offset = 0;
    f.descriptor = framer.read_text(text_offset);
    if (!detail::is_valid_utf8(f.descriptor)) throw detail::bad_text_encoding(text_offset + 4);
    for (std::size_t i = 0;; ++i) {
        auto raw = framer.read_media(i);
        if (!raw) break;
        if (!raw->format.valid()) throw detail::bad_format_name(i, raw->offset, raw->format);
        if (raw->stored_crc != raw->computed_crc) {
            throw detail::crc_mismatch(i, raw->offset, raw->stored_crc, raw->computed_crc);
        }
        f.media.push_back(MediaChunk{raw->format, std::move(raw->buffer), raw->stored_crc});
    }
    return f;
}

// Streaming

namespace {

class StreamSource {
public:
    StreamSource(std::istream& in, std::uint64_t& offset, std::optional<std::uint64_t> size)
        : in_(in), offset_(offset), size_(size) {}

    std::size_t read(std::uint8_t* dst, std::size_t n) {
        in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        offset_ += got;
        return got;
    }
    std::optional<std::uint64_t> remaining() const noexcept {
        if (!size_) return std::nullopt;
        return *size_ > offset_ ? *size_ - offset_ : 0;
    }
    bool at_end() {
        return in_.peek() == std::char_traits<char>::eof();
    }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::istream& in_;
    std::uint64_t& offset_;
    std::optional<std::uint64_t> size_;
};

}  // namespace

ChunkReader::ChunkReader(std::istream& in) : in_(&in) {
    // Seekable streams report their size so corrupt lengths fail before
    // anything is allocated.
    const auto start = in.tellg();
    if (start != std::istream::pos_type(-1) && in.seekg(0, std::ios::end)) {
        const auto end = in.tellg();
        in.seekg(start);
        if (end != std::istream::pos_type(-1) && end >= start) {
            stream_size_ = static_cast<std::uint64_t>(end - start);
        }
    }
    in.clear();
}

std::optional<ChunkEvent> ChunkReader::next() {
    StreamSource src(*in_, offset_, stream_size_);
    detail::Framer framer(src);
    if (!header_) header_ = framer.read_header();
    if (!text_done_) {
        std::uint64_t at = 0;
        std::string text = framer.read_text(at);
        if (!detail::is_valid_utf8(text)) throw detail::bad_text_encoding(at + 4);
        text_done_ = true;
        return ChunkEvent{ChunkKind::Text, at, TextualChunk{std::move(text)}};
    }
    const std::size_t i = media_index_;
    auto raw = framer.read_media(i);
    if (!raw) return std::nullopt;
    if (!raw->format.valid()) throw detail::bad_format_name(i, raw->offset, raw->format);
    if (raw->stored_crc != raw->computed_crc) {
        throw detail::crc_mismatch(i, raw->offset, raw->stored_crc, raw->computed_crc);
    }
    ++media_index_;
    return ChunkEvent{ChunkKind::Media, raw->offset,
                      MediaChunk{raw->format, std::move(raw->buffer), raw->stored_crc}};
}

}  // namespace ddoif
