#pragma once

#include <cstdint>
#include <span>

namespace ddoif {

/// CRC-32/ISO-HDLC (the zlib/PNG CRC): reflected polynomial 0xEDB88320,
/// initial value and final xor 0xFFFFFFFF.
std::uint32_t compute_crc32(std::span<const std::uint8_t> buffer) noexcept;

/// Incremental form of compute_crc32 for data that arrives in pieces.
class Crc32 {
public:
    void update(std::span<const std::uint8_t> bytes) noexcept;
    std::uint32_t value() const noexcept { return ~state_; }

private:
    std::uint32_t state_ = 0xFFFFFFFFu;
};

}  // namespace ddoif
