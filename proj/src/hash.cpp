#include "optday/hash.hpp"

#include <bit>
#include <fstream>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

void Fingerprint::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ULL;
    }
    // Separator so ("ab","c") and ("a","bc") differ.
    state_ ^= 0xff;
    state_ *= 0x100000001b3ULL;
}

void Fingerprint::update(double value) {
    update(static_cast<std::int64_t>(std::bit_cast<std::uint64_t>(value)));
}

void Fingerprint::update(std::int64_t value) {
    const auto bits = static_cast<std::uint64_t>(value);
    for (int shift = 0; shift < 64; shift += 8) {
        state_ ^= (bits >> shift) & 0xffU;
        state_ *= 0x100000001b3ULL;
    }
}

std::string Fingerprint::hex() const { return fmt::format("{:016x}", state_); }

std::string file_fingerprint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
    Fingerprint fp;
    std::string chunk(1 << 16, '\0');
    while (in) {
        in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
        fp.update(std::string_view(chunk.data(), static_cast<std::size_t>(in.gcount())));
    }
    return fp.hex();
}

}  // namespace optday
