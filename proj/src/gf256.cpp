#include "cvlt/gf256.hpp"

#include <cstdlib>
#include <cstdio>

namespace cvlt::gf256 {

SboxTables build_sbox() {
    SboxTables t;
    for (unsigned x = 0; x < 256; ++x) {
        auto s = affine_transform(gf_inv(static_cast<FieldElement>(x)));
        t.forward[x] = s;
        t.inverse[s] = static_cast<std::uint8_t>(x);
    }
    return t;
}

const SboxTables& sbox() {
    static const SboxTables tables = [] {
        auto t = build_sbox();
        if (t.forward[0x00] != 0x63 || t.forward[0x53] != 0xed) {
            std::fputs("cvlt: S-box self-check failed\n", stderr);
            std::abort();
        }
        return t;
    }();
    return tables;
}

}  // namespace cvlt::gf256
