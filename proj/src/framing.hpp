#pragma once

// Chunk framing shared by decode_file, ChunkReader and verify_file.
//
// A Source supplies:
//   std::size_t read(std::uint8_t* dst, std::size_t n)  -> bytes actually read
//   std::optional<std::uint64_t> remaining() const      -> bytes left, if known
//   bool at_end()                                        -> no bytes left
//   std::uint64_t offset() const                         -> absolute position

#include <array>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include "ddoif/container.hpp"
#include "ddoif/crc32.hpp"

namespace ddoif::detail {

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

inline void store_be32(std::uint8_t* p, std::uint32_t v) noexcept {
    p[0] = static_cast<std::uint8_t>(v >> 24);
    p[1] = static_cast<std::uint8_t>(v >> 16);
    p[2] = static_cast<std::uint8_t>(v >> 8);
    p[3] = static_cast<std::uint8_t>(v);
}

std::string hex32(std::uint32_t v);

DecodeError truncated(Field field, std::uint64_t offset, std::optional<std::size_t> media_index);
DecodeError magic_mismatch(std::span<const std::uint8_t> prefix);
DecodeError crc_mismatch(std::size_t index, std::uint64_t offset, std::uint32_t stored,
                         std::uint32_t computed);
DecodeError bad_format_name(std::size_t index, std::uint64_t offset, const FormatTag& tag);
DecodeError bad_text_encoding(std::uint64_t offset);

/// Media chunk as framed, before any semantic checks.
struct RawMedia {
    std::uint64_t offset = 0;
    FormatTag format;
    Bytes buffer;
    std::uint32_t stored_crc = 0;
    std::uint32_t computed_crc = 0;
};

template <class Source>
class Framer {
public:
    explicit Framer(Source& src) : src_(src) {}

    FileHeader read_header() {
        FileHeader h;
        const std::uint64_t start = src_.offset();
        const std::size_t got = src_.read(h.signature.data(), h.signature.size());
        const std::span<const std::uint8_t> seen(h.signature.data(), got);
        if (!std::equal(seen.begin(), seen.end(), kSignature.begin())) {
            // CRLF expansion pushes the signature out to 12 bytes.
            std::array<std::uint8_t, kSignatureSize + 2> wide{};
            std::copy(seen.begin(), seen.end(), wide.begin());
            std::size_t n = got;
            if (got == kSignatureSize) n += src_.read(wide.data() + got, 2);
            throw magic_mismatch({wide.data(), n});
        }
        if (got < h.signature.size()) throw truncated(Field::Signature, start, std::nullopt);
        if (src_.read(h.reserved.data(), h.reserved.size()) < h.reserved.size()) {
            throw truncated(Field::Reserved, start + kSignatureSize, std::nullopt);
        }
        return h;
    }

    /// Reads the descriptor chunk; `offset_out` receives its start.
    std::string read_text(std::uint64_t& offset_out) {
        offset_out = src_.offset();
        const std::uint32_t n = read_u32(Field::DescriptorLength, std::nullopt);
        std::string text;
        fill(text, n, Field::Descriptor, std::nullopt, nullptr);
        return text;
    }

    /// Next media chunk, or nullopt at a clean end of input.
    std::optional<RawMedia> read_media(std::size_t index) {
        if (src_.at_end()) return std::nullopt;
        RawMedia m;
        m.offset = src_.offset();
        FormatTag::Raw tag{};
        const std::size_t got = src_.read(tag.data(), tag.size());
        if (got < tag.size()) {
            DecodeError e(DecodeCode::TrailingGarbage, m.offset,
                          std::to_string(got) + " trailing byte(s) at offset " +
                              std::to_string(m.offset) +
                              " after the last complete chunk");
            e.media_index = index;
            throw e;
        }
        m.format = FormatTag::from_raw(tag);
        const std::uint32_t len = read_u32(Field::MediaLength, index);
        Crc32 crc;
        fill(m.buffer, len, Field::MediaBuffer, index, &crc);
        m.computed_crc = crc.value();
        m.stored_crc = read_u32(Field::MediaCrc, index);
        return m;
    }

private:
    std::uint32_t read_u32(Field field, std::optional<std::size_t> index) {
        const std::uint64_t at = src_.offset();
        std::uint8_t b[4];
        if (src_.read(b, 4) < 4) throw truncated(field, at, index);
        return load_be32(b);
    }

    template <class Buffer>
    void fill(Buffer& out, std::uint32_t len, Field field, std::optional<std::size_t> index,
              Crc32* crc) {
        const std::uint64_t at = src_.offset();
        const auto remaining = src_.remaining();
        if (remaining && *remaining < len) throw truncated(field, at, index);
        if (remaining) {
            out.resize(len);
            auto* dst = reinterpret_cast<std::uint8_t*>(out.data());
            src_.read(dst, len);
            if (crc) crc->update({dst, len});
            return;
        }
        // Unknown length: grow in bounded steps so a corrupt length field
        // cannot force a huge allocation up front.
        constexpr std::size_t kStep = std::size_t{1} << 20;
        std::size_t done = 0;
        while (done < len) {
            const std::size_t want = std::min<std::size_t>(kStep, len - done);
            out.resize(done + want);
            auto* dst = reinterpret_cast<std::uint8_t*>(out.data()) + done;
            const std::size_t got = src_.read(dst, want);
            if (crc) crc->update({dst, got});
            done += got;
            if (got < want) throw truncated(field, at, index);
        }
    }

    Source& src_;
};

/// Source over an in-memory byte span.
class SpanSource {
public:
    explicit SpanSource(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t read(std::uint8_t* dst, std::size_t n) noexcept {
        const std::size_t k = std::min(n, bytes_.size() - pos_);
        std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), k, dst);
        pos_ += k;
        return k;
    }
    std::optional<std::uint64_t> remaining() const noexcept { return bytes_.size() - pos_; }
    bool at_end() const noexcept { return pos_ == bytes_.size(); }
    std::uint64_t offset() const noexcept { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace ddoif::detail
