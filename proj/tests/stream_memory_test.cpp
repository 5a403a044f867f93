// Streams a ten-chunk container from disk and checks that the reader never
// holds much more than one chunk. Global operator new is replaced to track
// live heap bytes.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <new>

#include "test_support.hpp"

namespace {

std::atomic<std::size_t> g_live{0};
std::atomic<std::size_t> g_peak{0};

void note_alloc(std::size_t n) {
    const std::size_t now = g_live.fetch_add(n) + n;
    std::size_t peak = g_peak.load();
    while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
    }
}

}  // namespace

void* operator new(std::size_t n) {
    // Header stores the size so delete can account for it.
    auto* p = static_cast<std::size_t*>(std::malloc(n + sizeof(std::max_align_t)));
    if (!p) throw std::bad_alloc();
    *p = n;
    note_alloc(n);
    return reinterpret_cast<char*>(p) + sizeof(std::max_align_t);
}

void operator delete(void* p) noexcept {
    if (!p) return;
    auto* base = reinterpret_cast<std::size_t*>(static_cast<char*>(p) - sizeof(std::max_align_t));
    g_live.fetch_sub(*base);
    std::free(base);
}

void operator delete(void* p, std::size_t) noexcept { operator delete(p); }

int main() {
    using namespace ddoif;
    namespace fs = std::filesystem;

    const fs::path path = fs::temp_directory_path() / "ddoif_stream_memory_test.ddof";
    std::size_t largest = 0;
    {
        std::mt19937_64 rng(3);
        DdoifFile f;
        f.descriptor = R"({"classes":["clothing"],"attributes":[]})";
        for (int i = 0; i < 10; ++i) {
            const std::size_t n = 100000 + testing::uniform(rng, 0, 400000);
            largest = std::max(largest, n);
            f = append_media(f, MediaChunk::make(FormatTag::from_string(i % 2 ? "PNG" : "JPEG"),
                                                 testing::random_bytes(rng, n)));
        }
        const Bytes img = encode_file(f);
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
    }

    std::size_t chunks = 0;
    std::size_t peak_over_baseline = 0;
    {
        std::ifstream in(path, std::ios::binary);
        ChunkReader reader(in);
        const std::size_t baseline = g_live.load();
        g_peak.store(baseline);
        for (const auto& ev : reader) {
            (void)ev;
            ++chunks;
        }
        peak_over_baseline = g_peak.load() - baseline;
    }
    fs::remove(path);

    constexpr std::size_t kSlack = 64 * 1024;
    const bool ok = chunks == 11 && peak_over_baseline <= largest + kSlack;
    std::printf("%s: streamed %zu chunks, peak %zu bytes, largest chunk %zu bytes, limit %zu\n",
                ok ? "PASS" : "FAIL", chunks, peak_over_baseline, largest, largest + kSlack);
    return ok ? 0 : 1;
}
