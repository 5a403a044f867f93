#include <algorithm>

#include "ddoif/container.hpp"
#include "framing.hpp"
#include "utf8.hpp"

namespace ddoif {

std::string_view to_string(Severity s) noexcept {
    return s == Severity::Error ? "Error" : "Warning";
}

std::string Location::to_string() const {
    switch (kind) {
        case Kind::Header: return "Header";
        case Kind::Reserved: return "Reserved";
        case Kind::Text: return "Text";
        case Kind::Media: return "MediaIndex " + std::to_string(media_index);
    }
    return "?";
}

bool VerificationReport::ok() const noexcept { return error_count() == 0; }

std::size_t VerificationReport::error_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const auto& f) {
        return f.severity == Severity::Error;
    }));
}

std::size_t VerificationReport::warning_count() const noexcept {
    return findings.size() - error_count();
}

namespace {

Location location_of(const DecodeError& e) {
    if (e.media_index) return Location::media(*e.media_index);
    if (!e.field) return {};
    switch (*e.field) {
        case Field::Signature: return {Location::Kind::Header, 0};
        case Field::Reserved: return {Location::Kind::Reserved, 0};
        case Field::DescriptorLength:
        case Field::Descriptor: return {Location::Kind::Text, 0};
        default: return {};
    }
}

VerifyFinding error_finding(const DecodeError& e) {
    return {Severity::Error, location_of(e), std::string(to_string(e.code())), e.what(), e.offset()};
}

}  // namespace

VerificationReport verify_file(std::span<const std::uint8_t> bytes) {
    VerificationReport report;
    detail::SpanSource src(bytes);
    detail::Framer framer(src);
    report.signature_ok = bytes.size() >= kSignatureSize &&
                          std::equal(kSignature.begin(), kSignature.end(), bytes.begin());
    try {
        const FileHeader header = framer.read_header();
        report.reserved_zero = header.reserved_is_zero();
        if (!*report.reserved_zero) {
            report.findings.push_back({Severity::Warning,
                                       {Location::Kind::Reserved, 0},
                                       "ReservedNonZero",
                                       "reserved bytes are not all zero",
                                       kSignatureSize});
        }

        std::uint64_t text_offset = 0;
        const std::string text = framer.read_text(text_offset);
        report.descriptor_length = static_cast<std::uint32_t>(text.size());
        if (!detail::is_valid_utf8(text)) {
            report.findings.push_back(error_finding(detail::bad_text_encoding(text_offset + 4)));
        }

        for (std::size_t i = 0;; ++i) {
            auto raw = framer.read_media(i);
            if (!raw) break;
            report.chunks.push_back({i, raw->format.name(),
                                     static_cast<std::uint32_t>(raw->buffer.size()),
                                     raw->stored_crc, raw->computed_crc, raw->offset});
            if (!raw->format.valid()) {
                report.findings.push_back(
                    error_finding(detail::bad_format_name(i, raw->offset, raw->format)));
            }
            if (raw->stored_crc != raw->computed_crc) {
                report.findings.push_back(error_finding(
                    detail::crc_mismatch(i, raw->offset, raw->stored_crc, raw->computed_crc)));
            }
            if (raw->buffer.empty()) {
                report.findings.push_back({Severity::Warning, Location::media(i), "EmptyMedia",
                                           "media index " + std::to_string(i) +
                                               " has a zero-length buffer",
                                           raw->offset});
            }
        }
    } catch (const DecodeError& e) {
        if (e.code() == DecodeCode::MagicMismatch) report.mangling = e.mangling;
        report.findings.push_back(error_finding(e));
    }
    return report;
}

}  // namespace ddoif
