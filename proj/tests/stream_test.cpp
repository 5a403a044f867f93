#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

namespace ddoif {
namespace {

std::vector<ChunkEvent> collect(std::istream& in) {
    ChunkReader reader(in);
    std::vector<ChunkEvent> out;
    for (const auto& ev : reader) out.push_back(ev);
    return out;
}

std::string as_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

/// Forward-only stream buffer: no seeking, so the reader cannot learn the size.
class PipeBuf : public std::streambuf {
public:
    explicit PipeBuf(std::string data) : data_(std::move(data)) {
        setg(data_.data(), data_.data(), data_.data() + data_.size());
    }

private:
    std::string data_;
};

TEST(ChunkReader, MinimalFileYieldsOneTextChunk) {
    std::istringstream in(as_string(encode_file(DdoifFile{})));
    const auto events = collect(in);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, ChunkKind::Text);
    EXPECT_EQ(events[0].offset, 26u);
    EXPECT_EQ(std::get<TextualChunk>(events[0].chunk).text, "");
}

TEST(ChunkReader, ThreeMediaChunksInOrder) {
    DdoifFile f;
    f.descriptor = "{\"classes\":[]}";
    for (int i = 0; i < 3; ++i) {
        f = append_media(f, MediaChunk::make(FormatTag::from_string("PNG"), Bytes(5 + i, 0x41)));
    }
    std::istringstream in(as_string(encode_file(f)));
    const auto events = collect(in);
    ASSERT_EQ(events.size(), 4u);
    std::uint64_t last = 0;
    for (std::size_t i = 1; i < events.size(); ++i) {
        EXPECT_EQ(events[i].kind, ChunkKind::Media);
        EXPECT_GT(events[i].offset, last);
        last = events[i].offset;
    }
    EXPECT_EQ(events[1].offset, 30u + f.descriptor.size());
}

TEST(ChunkReader, MatchesDecodeFile) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const DdoifFile f = testing::random_file(rng, 5, 3000);
        const Bytes img = encode_file(f);
        std::istringstream in(as_string(img));
        ChunkReader reader(in);
        std::vector<ChunkEvent> events;
        for (const auto& ev : reader) events.push_back(ev);
        const DdoifFile decoded = decode_file(img);
        ASSERT_EQ(events.size(), decoded.media.size() + 1);
        EXPECT_EQ(std::get<TextualChunk>(events[0].chunk).text, decoded.descriptor);
        for (std::size_t i = 0; i < decoded.media.size(); ++i) {
            EXPECT_EQ(std::get<MediaChunk>(events[i + 1].chunk), decoded.media[i]);
        }
        ASSERT_TRUE(reader.header().has_value());
        EXPECT_EQ(*reader.header(), decoded.header);
    }
}

TEST(ChunkReader, NonSeekableStream) {
    DdoifFile f;
    f = append_media(f, MediaChunk::make(FormatTag::from_string("STL"), Bytes(3000000, 0x11)));
    PipeBuf buf(as_string(encode_file(f)));
    std::istream in(&buf);
    const auto events = collect(in);
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(std::get<MediaChunk>(events[1].chunk), f.media[0]);
}

TEST(ChunkReader, NonSeekableTruncation) {
    Bytes img = encode_file(append_media(DdoifFile{}, MediaChunk::make(FormatTag::from_string("PNG"),
                                                                         Bytes(100, 1))));
    img.resize(img.size() - 50);
    PipeBuf buf(as_string(img));
    std::istream in(&buf);
    ChunkReader reader(in);
    ASSERT_TRUE(reader.next().has_value());
    try {
        reader.next();
        FAIL();
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.code(), DecodeCode::Truncated);
        EXPECT_EQ(e.field, Field::MediaBuffer);
        EXPECT_EQ(e.media_index, 0u);
    }
}

TEST(ChunkReader, ErrorRaisedAtFailingChunk) {
    DdoifFile f;
    for (int i = 0; i < 3; ++i) {
        f = append_media(f, MediaChunk::make(FormatTag::from_string("JPEG"), Bytes(10, 0x20 + i)));
    }
    Bytes img = encode_file(f);
    // Corrupt the buffer of media index 2.
    img[30 + 2 * 26 + 12 + 3] ^= 0x01;
    std::istringstream in(as_string(img));
    ChunkReader reader(in);
    EXPECT_TRUE(reader.next());  // text
    EXPECT_TRUE(reader.next());  // media 0
    EXPECT_TRUE(reader.next());  // media 1
    try {
        reader.next();
        FAIL();
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.code(), DecodeCode::CrcMismatch);
        EXPECT_EQ(e.media_index, 2u);
    }
}

TEST(ChunkReader, BadSignature) {
    std::istringstream in(std::string("GIF89a...................."));
    ChunkReader reader(in);
    EXPECT_THROW(reader.next(), DecodeError);
}

}  // namespace
}  // namespace ddoif
