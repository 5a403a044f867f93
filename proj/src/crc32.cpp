#include "ddoif/crc32.hpp"

#include <array>

namespace ddoif {
namespace {

constexpr std::array<std::uint32_t, 256> make_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[n] = c;
    }
    return table;
}

constexpr auto kTable = make_table();

}  // namespace

void Crc32::update(std::span<const std::uint8_t> bytes) noexcept {
    std::uint32_t c = state_;
    for (std::uint8_t b : bytes) c = kTable[(c ^ b) & 0xFFu] ^ (c >> 8);
    state_ = c;
}

std::uint32_t compute_crc32(std::span<const std::uint8_t> buffer) noexcept {
    Crc32 crc;
    crc.update(buffer);
    return crc.value();
}

}  // namespace ddoif
