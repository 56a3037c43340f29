#pragma once
// HOMF: bit-exact on-disk format for binary frame stacks.
//
// Layout, little-endian:
//   magic "HOMF" (4 bytes)
//   version        u16   (currently 1)
//   width          u16
//   height         u16
//   frame count    u32
//   seed           u64
//   settings len   u32
//   settings       UTF-8 structured text (JSON), settings-len bytes
//   frames         bit-packed row-major, each row padded to a byte
//                  boundary, MSB = leftmost pixel
//
// Any structural defect raises FormatError carrying the byte offset.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "homsim/camera.hpp"

namespace homsim {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::uint64_t byte_offset() const { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

inline constexpr std::uint16_t kHomfVersion = 1;

void write_stack(const FrameStack& stack, const std::filesystem::path& path);
FrameStack read_stack(const std::filesystem::path& path);

// In-memory codec used by the file functions and the round-trip tests.
std::vector<std::uint8_t> encode_stack(const FrameStack& stack);
FrameStack decode_stack(const std::vector<std::uint8_t>& bytes);

}  // namespace homsim
