#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ddoif {
namespace {

using testing::bytes_of;

Bytes minimal_image() {
    Bytes b(kMinimalFileSize, 0x00);
    std::copy(kSignature.begin(), kSignature.end(), b.begin());
    return b;
}

template <class F>
DecodeError expect_decode_error(F&& f) {
    try {
        f();
    } catch (const DecodeError& e) {
        return e;
    }
    ADD_FAILURE() << "expected DecodeError";
    return DecodeError(DecodeCode::MagicMismatch, 0, "none");
}

TEST(Encode, MinimalFileIsThirtyBytes) {
    const Bytes out = encode_file(DdoifFile{});
    EXPECT_EQ(out, minimal_image());
    EXPECT_EQ(out.size(), 30u);
}

TEST(Encode, TwoByteDescriptor) {
    DdoifFile f;
    f.descriptor = "{}";
    const Bytes out = encode_file(f);
    ASSERT_EQ(out.size(), 32u);
    EXPECT_EQ(Bytes(out.begin() + 26, out.begin() + 30), (Bytes{0x00, 0x00, 0x00, 0x02}));
    EXPECT_EQ(out[30], '{');
    EXPECT_EQ(out[31], '}');
}

TEST(Encode, PngChunkGolden) {
    DdoifFile f;
    f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), {0xDE, 0xAD, 0xBE, 0xEF}));
    const Bytes out = encode_file(f);
    const Bytes chunk(out.begin() + 30, out.end());
    const Bytes expected = {'P',  'N',  'G',  0x00, 0x00, 0x00, 0x00, 0x00,  // tag
                            0x00, 0x00, 0x00, 0x04,                          // M
                            0xDE, 0xAD, 0xBE, 0xEF,                          // buffer
                            0x7C, 0x9C, 0xA3, 0x5A};                         // CRC (oracle)
    EXPECT_EQ(chunk, expected);
}

TEST(Encode, RecomputesStaleCrc) {
    DdoifFile f;
    f.media.push_back(MediaChunk{FormatTag::from_string("JPEG"), {1, 2, 3}, 0x12345678u});
    const DdoifFile back = decode_file(encode_file(f));
    EXPECT_EQ(back.media[0].crc, testing::reference_crc32(Bytes{1, 2, 3}));
}

TEST(Encode, AlwaysWritesZeroReserved) {
    DdoifFile f;
    f.header.reserved.fill(0xAB);
    const Bytes out = encode_file(f);
    EXPECT_TRUE(std::all_of(out.begin() + 10, out.begin() + 26, [](auto b) { return b == 0; }));
}

TEST(Encode, LengthOneIsBigEndian) {
    DdoifFile f;
    f.descriptor = "x";
    const Bytes out = encode_file(f);
    EXPECT_EQ(Bytes(out.begin() + 26, out.begin() + 30), (Bytes{0x00, 0x00, 0x00, 0x01}));
}

TEST(Encode, RejectsInvalidRawFormatName) {
    DdoifFile f;
    f.media.push_back(MediaChunk::make(FormatTag{}, {1}));
    try {
        encode_file(f);
        FAIL();
    } catch (const EncodeError& e) {
        EXPECT_EQ(e.code(), EncodeCode::InvalidFormatName);
    }
}

TEST(FormatTag, CanonicalUppercaseAndPadding) {
    const FormatTag t = FormatTag::from_string("jpg");
    EXPECT_EQ(t.name(), "JPG");
    const FormatTag::Raw expected = {'J', 'P', 'G', 0, 0, 0, 0, 0};
    EXPECT_EQ(t.raw(), expected);
    EXPECT_TRUE(t.valid());
}

TEST(FormatTag, CaseInsensitiveButJpgIsNotJpeg) {
    const FormatTag lower = FormatTag::from_raw({'j', 'p', 'g', 0, 0, 0, 0, 0});
    EXPECT_EQ(lower, FormatTag::from_string("JPG"));
    EXPECT_NE(FormatTag::from_string("JPG"), FormatTag::from_string("JPEG"));
}

TEST(FormatTag, LengthLimits) {
    EXPECT_NO_THROW(FormatTag::from_string("ABCDEFGH"));
    EXPECT_THROW(FormatTag::from_string("ABCDEFGHI"), EncodeError);
    EXPECT_THROW(FormatTag::from_string(""), EncodeError);
    EXPECT_THROW(FormatTag::from_string("J\xC3\xA9"), EncodeError);
}

TEST(FormatTag, PaddingMustBeZero) {
    EXPECT_FALSE(FormatTag::from_raw({'P', 'N', 'G', 0, 'X', 0, 0, 0}).valid());
    EXPECT_FALSE(FormatTag::from_raw({0, 0, 0, 0, 0, 0, 0, 0}).valid());
    EXPECT_FALSE(FormatTag::from_raw({'P', 0x01, 0, 0, 0, 0, 0, 0}).valid());
    EXPECT_TRUE(FormatTag::from_raw({'3', 'D', 'S', 0, 0, 0, 0, 0}).valid());
}

TEST(AppendMedia, LeavesOriginalUntouched) {
    const DdoifFile empty;
    const DdoifFile one = append_media(empty, MediaChunk::make(FormatTag::from_string("PNG"), {9}));
    EXPECT_TRUE(empty.media.empty());
    ASSERT_EQ(one.media.size(), 1u);
}

TEST(AppendMedia, TenJpegsKeepInsertionOrder) {
    DdoifFile f;
    for (std::uint8_t i = 0; i < 10; ++i) {
        f = append_media(f, MediaChunk{FormatTag::from_string("JPEG"), Bytes(i + 1u, i), 0});
    }
    ASSERT_EQ(f.media.size(), 10u);
    for (std::uint8_t i = 0; i < 10; ++i) {
        EXPECT_EQ(f.media[i].buffer, Bytes(i + 1u, i));
        EXPECT_EQ(f.media[i].crc, testing::reference_crc32(f.media[i].buffer));
    }
}

TEST(AppendMedia, NineCharacterTagRejected) {
    EXPECT_THROW(
        {
            FormatTag t = FormatTag::from_string("TOOLONGTAG");
            (void)t;
        },
        EncodeError);
    FormatTag::Raw raw = {'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H'};
    raw[3] = 0x00;
    raw[5] = 'Z';  // non-zero after padding starts
    try {
        append_media(DdoifFile{}, MediaChunk{FormatTag::from_raw(raw), {1}, 0});
        FAIL();
    } catch (const EncodeError& e) {
        EXPECT_EQ(e.code(), EncodeCode::InvalidFormatName);
    }
}

TEST(Decode, MinimalRoundTrip) {
    const DdoifFile f = decode_file(minimal_image());
    EXPECT_EQ(f, DdoifFile{});
}

TEST(Decode, HeaderKeepsReservedBytes) {
    Bytes img = minimal_image();
    img[12] = 0x7F;
    const FileHeader h = decode_header(img);
    EXPECT_FALSE(h.reserved_is_zero());
    EXPECT_EQ(h.reserved[2], 0x7F);
    EXPECT_NO_THROW(decode_file(img));
}

TEST(Decode, HeaderRequiresTwentySixBytes) {
    const Bytes img = minimal_image();
    const auto e = expect_decode_error([&] { decode_header(std::span(img).first(20)); });
    EXPECT_EQ(e.code(), DecodeCode::Truncated);
    EXPECT_EQ(e.field, Field::Reserved);
}

TEST(Decode, CrlfConversionDetected) {
    Bytes img = minimal_image();
    img.erase(img.begin() + 6);  // 0D 0A -> 0A
    const auto e = expect_decode_error([&] { decode_file(img); });
    EXPECT_EQ(e.code(), DecodeCode::MagicMismatch);
    EXPECT_EQ(e.mangling, Mangling::CrlfToLf);
    EXPECT_NE(std::string(e.what()).find("CRLF"), std::string::npos);
}

TEST(Decode, HighBitStrippedDetected) {
    Bytes img = minimal_image();
    img[0] = 0x09;
    const auto e = expect_decode_error([&] { decode_header(img); });
    EXPECT_EQ(e.code(), DecodeCode::MagicMismatch);
    EXPECT_EQ(e.mangling, Mangling::HighBitStripped);
    EXPECT_NE(std::string(e.what()).find("7-bit"), std::string::npos);
}

TEST(Decode, LfToCrlfDetectedBothStyles) {
    const Bytes img = minimal_image();
    for (bool naive : {false, true}) {
        const auto e = expect_decode_error([&] { decode_file(testing::lf_to_crlf(img, naive)); });
        EXPECT_EQ(e.code(), DecodeCode::MagicMismatch);
        EXPECT_EQ(e.mangling, Mangling::LfToCrlf) << "naive=" << naive;
    }
}

TEST(Decode, ForeignFileIsUnclassifiedMismatch) {
    const Bytes png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A, 0, 0, 0, 0};
    const auto e = expect_decode_error([&] { decode_file(png); });
    EXPECT_EQ(e.code(), DecodeCode::MagicMismatch);
    EXPECT_EQ(e.mangling, Mangling::None);
}

TEST(Decode, ShortSignaturePrefixIsTruncated) {
    const Bytes img = minimal_image();
    const auto e = expect_decode_error([&] { decode_file(std::span(img).first(5)); });
    EXPECT_EQ(e.code(), DecodeCode::Truncated);
    EXPECT_EQ(e.field, Field::Signature);
    const auto empty = expect_decode_error([&] { decode_file({}); });
    EXPECT_EQ(empty.code(), DecodeCode::Truncated);
}

TEST(Decode, TruncationNamesTheField) {
    DdoifFile f;
    f.descriptor = "abc";
    f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), Bytes(10, 7)));
    const Bytes img = encode_file(f);
    // 0-25 header, 26-29 N, 30-32 text, 33-40 tag, 41-44 M, 45-54 buffer, 55-58 crc
    const std::vector<std::pair<std::size_t, Field>> cuts = {
        {28, Field::DescriptorLength}, {31, Field::Descriptor}, {43, Field::MediaLength},
        {50, Field::MediaBuffer},      {57, Field::MediaCrc},
    };
    for (const auto& [len, field] : cuts) {
        const auto e = expect_decode_error([&] { decode_file(std::span(img).first(len)); });
        EXPECT_EQ(e.code(), DecodeCode::Truncated) << len;
        EXPECT_EQ(e.field, field) << len;
    }
}

TEST(Decode, TrailingGarbage) {
    Bytes img = minimal_image();
    img.insert(img.end(), {'P', 'N', 'G'});
    const auto e = expect_decode_error([&] { decode_file(img); });
    EXPECT_EQ(e.code(), DecodeCode::TrailingGarbage);
    EXPECT_EQ(e.offset(), 30u);
}

TEST(Decode, HugeLengthFailsWithoutAllocating) {
    Bytes img = minimal_image();
    img[26] = img[27] = img[28] = img[29] = 0xFF;
    const auto e = expect_decode_error([&] { decode_file(img); });
    EXPECT_EQ(e.code(), DecodeCode::Truncated);
    EXPECT_EQ(e.field, Field::Descriptor);
}

TEST(Decode, FlippedMediaBitIsCrcMismatch) {
    DdoifFile f;
    f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), {1, 2, 3, 4}));
    Bytes img = encode_file(f);
    img[30 + 12 + 1] ^= 0x10;
    const auto e = expect_decode_error([&] { decode_file(img); });
    EXPECT_EQ(e.code(), DecodeCode::CrcMismatch);
    EXPECT_EQ(e.media_index, 0u);
    EXPECT_NE(e.stored_crc, e.computed_crc);
    EXPECT_NE(std::string(e.what()).find("CRC mismatch at media index 0"), std::string::npos);
}

TEST(Decode, InvalidUtf8Descriptor) {
    DdoifFile f;
    f.descriptor = "\xC0\xAF";  // overlong '/'
    const auto e = expect_decode_error([&] { decode_file(encode_file(f)); });
    EXPECT_EQ(e.code(), DecodeCode::TextEncoding);
}

TEST(Decode, InvalidTagRejected) {
    DdoifFile f;
    f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), {1}));
    Bytes img = encode_file(f);
    img[30 + 5] = 'Q';  // non-zero byte inside the padding
    const auto e = expect_decode_error([&] { decode_file(img); });
    EXPECT_EQ(e.code(), DecodeCode::InvalidFormatName);
}

TEST(Decode, LowercaseTagSurvivesReencode) {
    DdoifFile f;
    f.media.push_back(MediaChunk::make(FormatTag::from_raw({'p', 'n', 'g', 0, 0, 0, 0, 0}), {5}));
    const Bytes img = encode_file(f);
    const DdoifFile back = decode_file(img);
    EXPECT_EQ(back.media[0].format.raw()[0], 'p');
    EXPECT_EQ(encode_file(back), img);
}

TEST(Utf8, DescriptorValidity) {
    for (const char* ok : {"", "plain", "caf\xC3\xA9", "\xF0\x9F\x91\x97", "\xE2\x82\xAC"}) {
        DdoifFile f;
        f.descriptor = ok;
        EXPECT_NO_THROW(decode_file(encode_file(f))) << ok;
    }
    for (const char* bad : {"\xFF", "\xC3", "\xED\xA0\x80", "\xF4\x90\x80\x80", "\xE0\x80\x80"}) {
        DdoifFile f;
        f.descriptor = bad;
        EXPECT_THROW(decode_file(encode_file(f)), DecodeError);
    }
}

// Properties

TEST(CodecProperty, RoundTripAndSizeLaw) {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const DdoifFile f = testing::random_file(rng, 6, 4096);
        const Bytes img = encode_file(f);
        std::uint64_t expected = 30 + f.descriptor.size();
        for (const auto& m : f.media) expected += 16 + m.buffer.size();
        ASSERT_EQ(img.size(), expected);
        ASSERT_EQ(encoded_size(f), expected);
        ASSERT_EQ(decode_file(img), f);
        ASSERT_EQ(encode_file(f), img);  // deterministic
    }
}

TEST(CodecProperty, EverySingleBitFlipInBufferIsDetected) {
    std::mt19937_64 rng(99);
    DdoifFile f;
    f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), testing::random_bytes(rng, 64)));
    const Bytes img = encode_file(f);
    const std::size_t start = 30 + 12;
    for (std::size_t bit = 0; bit < 64 * 8; ++bit) {
        Bytes bad = img;
        bad[start + bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        const auto e = expect_decode_error([&] { decode_file(bad); });
        ASSERT_EQ(e.code(), DecodeCode::CrcMismatch) << bit;
    }
}

TEST(CodecProperty, ManglingAlwaysMagicMismatch) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Bytes img = encode_file(testing::random_file(rng, 3, 512));
        EXPECT_EQ(expect_decode_error([&] { decode_file(testing::crlf_to_lf(img)); }).mangling,
                  Mangling::CrlfToLf);
        EXPECT_EQ(expect_decode_error([&] { decode_file(testing::lf_to_crlf(img, false)); }).mangling,
                  Mangling::LfToCrlf);
        EXPECT_EQ(expect_decode_error([&] { decode_file(testing::strip_high_bit(img)); }).mangling,
                  Mangling::HighBitStripped);
    }
}

}  // namespace
}  // namespace ddoif
