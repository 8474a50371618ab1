#include "cvlt/bigint.hpp"

#include <algorithm>
#include <bit>

#include "cvlt/error.hpp"

namespace cvlt::rsa {

namespace {

using Limbs = std::vector<std::uint32_t>;
constexpr std::uint64_t kBase = std::uint64_t{1} << 32;

int compare_limbs(const Limbs& a, const Limbs& b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

}  // namespace

BigUint::BigUint(std::uint64_t v) {
    if (v != 0) limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
}

void BigUint::trim() noexcept {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::from_bytes_be(ByteView bytes) {
    Limbs limbs((bytes.size() + 3) / 4, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const std::size_t pos = bytes.size() - 1 - i;  // byte significance
        limbs[pos / 4] |= std::uint32_t{bytes[i]} << (8 * (pos % 4));
    }
    return BigUint(std::move(limbs));
}

Bytes BigUint::to_bytes_be() const { return to_bytes_be(byte_length()); }

Bytes BigUint::to_bytes_be(std::size_t len) const {
    if (byte_length() > len) throw Error(Errc::capacity, "integer does not fit in the requested length");
    Bytes out(len, 0);
    for (std::size_t pos = 0; pos < byte_length(); ++pos)
        out[len - 1 - pos] = static_cast<std::uint8_t>(limbs_[pos / 4] >> (8 * (pos % 4)));
    return out;
}

BigUint BigUint::from_hex(std::string_view hex) {
    if (hex.empty()) throw Error(Errc::invalid_argument, "empty hex integer");
    Limbs limbs((hex.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[hex.size() - 1 - i];
        std::uint32_t v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw Error(Errc::invalid_argument, "invalid hex digit in integer");
        limbs[i / 8] |= v << (4 * (i % 8));
    }
    return BigUint(std::move(limbs));
}

std::string BigUint::to_hex() const {
    if (is_zero()) return "0";
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    const std::size_t nibbles = (bit_length() + 3) / 4;
    out.reserve(nibbles);
    for (std::size_t i = nibbles; i-- > 0;) out.push_back(digits[(limbs_[i / 8] >> (4 * (i % 8))) & 0xf]);
    return out;
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigUint v = *this;
    const BigUint chunk(1000000000);
    while (!v.is_zero()) {
        auto [q, r] = divmod(v, chunk);
        auto part = std::to_string(r.to_u64());
        if (!q.is_zero()) part.insert(0, 9 - part.size(), '0');
        out.insert(0, part);
        v = std::move(q);
    }
    return out;
}

std::size_t BigUint::bit_length() const noexcept {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) + static_cast<std::size_t>(std::bit_width(limbs_.back()));
}

bool BigUint::test_bit(std::size_t i) const noexcept {
    const std::size_t limb = i / 32;
    return limb < limbs_.size() && ((limbs_[limb] >> (i % 32)) & 1);
}

void BigUint::set_bit(std::size_t i) {
    const std::size_t limb = i / 32;
    if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= std::uint32_t{1} << (i % 32);
}

std::uint64_t BigUint::to_u64() const noexcept {
    std::uint64_t v = 0;
    if (!limbs_.empty()) v = limbs_[0];
    if (limbs_.size() > 1) v |= std::uint64_t{limbs_[1]} << 32;
    return v;
}

std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) noexcept {
    const int c = compare_limbs(a.limbs_, b.limbs_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t s = std::uint64_t{limbs_[i]} + carry + (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
        limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
        if (carry == 0 && i >= rhs.limbs_.size()) break;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (compare_limbs(limbs_, rhs.limbs_) < 0) throw Error(Errc::invalid_argument, "BigUint subtraction underflow");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::int64_t d = std::int64_t{limbs_[i]} - borrow - (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
        borrow = d < 0 ? 1 : 0;
        limbs_[i] = static_cast<std::uint32_t>(d);
        if (borrow == 0 && i >= rhs.limbs_.size()) break;
    }
    trim();
    return *this;
}

BigUint& BigUint::operator<<=(std::size_t bits) {
    if (is_zero() || bits == 0) return *this;
    const std::size_t limb_shift = bits / 32;
    const unsigned bit_shift = bits % 32;
    Limbs out(limbs_.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        const std::uint64_t v = std::uint64_t{limbs_[i]} << bit_shift;
        out[i + limb_shift] |= static_cast<std::uint32_t>(v);
        out[i + limb_shift + 1] |= static_cast<std::uint32_t>(v >> 32);
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

BigUint& BigUint::operator>>=(std::size_t bits) {
    const std::size_t limb_shift = bits / 32;
    const unsigned bit_shift = bits % 32;
    if (limb_shift >= limbs_.size()) {
        limbs_.clear();
        return *this;
    }
    Limbs out(limbs_.size() - limb_shift, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = limbs_[i + limb_shift];
        if (i + limb_shift + 1 < limbs_.size()) v |= std::uint64_t{limbs_[i + limb_shift + 1]} << 32;
        out[i] = static_cast<std::uint32_t>(v >> bit_shift);
    }
    limbs_ = std::move(out);
    trim();
    return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Limbs out(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        const std::uint64_t ai = a.limbs_[i];
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            const std::uint64_t t = ai * b.limbs_[j] + out[i + j] + carry;
            out[i + j] = static_cast<std::uint32_t>(t);
            carry = t >> 32;
        }
        out[i + b.limbs_.size()] = static_cast<std::uint32_t>(carry);
    }
    return BigUint(std::move(out));
}

std::uint32_t BigUint::mod_u32(std::uint32_t m) const {
    if (m == 0) throw Error(Errc::invalid_argument, "division by zero");
    std::uint64_t r = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) r = ((r << 32) | limbs_[i]) % m;
    return static_cast<std::uint32_t>(r);
}

// Knuth, TAOCP vol. 2, Algorithm D.
std::pair<BigUint, BigUint> BigUint::divmod(const BigUint& a, const BigUint& b) {
    if (b.is_zero()) throw Error(Errc::invalid_argument, "division by zero");
    if (compare_limbs(a.limbs_, b.limbs_) < 0) return {BigUint{}, a};

    const std::size_t n = b.limbs_.size();
    if (n == 1) {
        const std::uint64_t d = b.limbs_[0];
        Limbs q(a.limbs_.size(), 0);
        std::uint64_t r = 0;
        for (std::size_t i = a.limbs_.size(); i-- > 0;) {
            const std::uint64_t cur = (r << 32) | a.limbs_[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            r = cur % d;
        }
        return {BigUint(std::move(q)), BigUint(r)};
    }

    const std::size_t m = a.limbs_.size() - n;
    const int s = std::countl_zero(b.limbs_.back());
    Limbs v(n), u(a.limbs_.size() + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        v[i] = b.limbs_[i] << s;
        if (s != 0 && i > 0) v[i] |= b.limbs_[i - 1] >> (32 - s);
    }
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        u[i] = a.limbs_[i] << s;
        if (s != 0 && i > 0) u[i] |= a.limbs_[i - 1] >> (32 - s);
    }
    if (s != 0) u[a.limbs_.size()] = a.limbs_.back() >> (32 - s);

    Limbs q(m + 1, 0);
    for (std::size_t j = m + 1; j-- > 0;) {
        const std::uint64_t num = (std::uint64_t{u[j + n]} << 32) | u[j + n - 1];
        std::uint64_t qhat = num / v[n - 1];
        std::uint64_t rhat = num % v[n - 1];
        while (qhat >= kBase || qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v[n - 1];
            if (rhat >= kBase) break;
        }

        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            const std::int64_t t = std::int64_t{u[i + j]} - borrow - static_cast<std::int64_t>(p & 0xffffffffu);
            u[i + j] = static_cast<std::uint32_t>(t);
            borrow = t < 0 ? 1 : 0;
        }
        const std::int64_t t = std::int64_t{u[j + n]} - borrow - static_cast<std::int64_t>(carry);
        u[j + n] = static_cast<std::uint32_t>(t);

        if (t < 0) {
            --qhat;
            std::uint64_t c = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t sum = std::uint64_t{u[i + j]} + v[i] + c;
                u[i + j] = static_cast<std::uint32_t>(sum);
                c = sum >> 32;
            }
            u[j + n] += static_cast<std::uint32_t>(c);
        }
        q[j] = static_cast<std::uint32_t>(qhat);
    }

    Limbs r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = u[i] >> s;
        if (s != 0) r[i] |= u[i + 1] << (32 - s);
    }
    return {BigUint(std::move(q)), BigUint(std::move(r))};
}

namespace {

// Montgomery arithmetic modulo an odd m with R = 2^(32n).
class Montgomery {
public:
    explicit Montgomery(const BigUint& m) : m_(m), mod_(m.limbs()), n_(mod_.size()) {
        // Newton iteration for m^-1 mod 2^32, then negate.
        std::uint32_t inv = 1;
        for (int i = 0; i < 5; ++i) inv *= 2 - mod_[0] * inv;
        m0inv_ = ~inv + 1;
    }

    std::size_t size() const noexcept { return n_; }

    Limbs to_mont(const BigUint& x) const { return pad(((x % m_) << (32 * n_)) % m_); }
    BigUint from_mont(const Limbs& x) const {
        Limbs one(n_, 0);
        one[0] = 1;
        Limbs out(n_);
        Limbs scratch(n_ + 2);
        mul(x.data(), one.data(), out.data(), scratch.data());
        return unpad(out);
    }

    // out = a * b / R mod m. `out` may alias `a` or `b`; `t` needs n + 2 limbs.
    void mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::uint32_t* t) const {
        std::fill(t, t + n_ + 2, 0u);
        for (std::size_t i = 0; i < n_; ++i) {
            std::uint64_t c = 0;
            const std::uint64_t bi = b[i];
            for (std::size_t j = 0; j < n_; ++j) {
                const std::uint64_t cs = t[j] + a[j] * bi + c;
                t[j] = static_cast<std::uint32_t>(cs);
                c = cs >> 32;
            }
            std::uint64_t cs = std::uint64_t{t[n_]} + c;
            t[n_] = static_cast<std::uint32_t>(cs);
            t[n_ + 1] = static_cast<std::uint32_t>(cs >> 32);

            const std::uint64_t mm = static_cast<std::uint32_t>(t[0] * m0inv_);
            cs = t[0] + mm * mod_[0];
            c = cs >> 32;
            for (std::size_t j = 1; j < n_; ++j) {
                cs = t[j] + mm * mod_[j] + c;
                t[j - 1] = static_cast<std::uint32_t>(cs);
                c = cs >> 32;
            }
            cs = std::uint64_t{t[n_]} + c;
            t[n_ - 1] = static_cast<std::uint32_t>(cs);
            t[n_] = t[n_ + 1] + static_cast<std::uint32_t>(cs >> 32);
        }
        // t < 2m; one conditional subtraction brings it below m.
        bool ge = t[n_] != 0;
        if (!ge) {
            ge = true;
            for (std::size_t i = n_; i-- > 0;) {
                if (t[i] != mod_[i]) {
                    ge = t[i] > mod_[i];
                    break;
                }
            }
        }
        if (ge) {
            std::int64_t borrow = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                const std::int64_t d = std::int64_t{t[i]} - borrow - mod_[i];
                out[i] = static_cast<std::uint32_t>(d);
                borrow = d < 0 ? 1 : 0;
            }
        } else {
            std::copy(t, t + n_, out);
        }
    }

private:
    Limbs pad(const BigUint& x) const {
        Limbs out = x.limbs();
        out.resize(n_, 0);
        return out;
    }
    static BigUint unpad(const Limbs& x) {
        BigUint r;
        for (std::size_t i = x.size(); i-- > 0;) {
            r <<= 32;
            r += BigUint(x[i]);
        }
        return r;
    }

    BigUint m_;
    Limbs mod_;
    std::size_t n_;
    std::uint32_t m0inv_ = 0;
};

}  // namespace

BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& m) {
    if (m < BigUint(2)) throw Error(Errc::invalid_argument, "modulus must be at least 2");
    if (exp.is_zero()) return BigUint(1);

    if (m.is_odd()) {
        // Fixed 4-bit windows over a table of b^0..b^15.
        const Montgomery mont(m);
        const std::size_t n = mont.size();
        Limbs scratch(n + 2);
        std::vector<Limbs> table(16);
        table[0] = mont.to_mont(BigUint(1));
        table[1] = mont.to_mont(base);
        for (std::size_t i = 2; i < 16; ++i) {
            table[i].resize(n);
            mont.mul(table[i - 1].data(), table[1].data(), table[i].data(), scratch.data());
        }
        const std::size_t windows = (exp.bit_length() + 3) / 4;
        Limbs acc = table[0];
        for (std::size_t w = windows; w-- > 0;) {
            if (w + 1 != windows)
                for (int k = 0; k < 4; ++k) mont.mul(acc.data(), acc.data(), acc.data(), scratch.data());
            unsigned digit = 0;
            for (int k = 3; k >= 0; --k) digit = (digit << 1) | (exp.test_bit(4 * w + static_cast<std::size_t>(k)) ? 1u : 0u);
            if (digit != 0) mont.mul(acc.data(), table[digit].data(), acc.data(), scratch.data());
        }
        return mont.from_mont(acc);
    }

    const BigUint b = base % m;
    BigUint acc = b;
    for (std::size_t i = exp.bit_length() - 1; i-- > 0;) {
        acc = (acc * acc) % m;
        if (exp.test_bit(i)) acc = (acc * b) % m;
    }
    return acc;
}

BigUint gcd(BigUint a, BigUint b) {
    while (!b.is_zero()) {
        BigUint r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigUint lcm(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return a / gcd(a, b) * b;
}

std::optional<BigUint> mod_inverse(const BigUint& a, const BigUint& m) {
    if (m.is_zero()) return std::nullopt;
    // Bezout coefficients are tracked modulo m so they stay nonnegative.
    BigUint old_r = a % m, r = m;
    BigUint old_s(1), s(0);
    while (!r.is_zero()) {
        auto [q, rem] = BigUint::divmod(old_r, r);
        old_r = std::exchange(r, std::move(rem));
        const BigUint qs = (q * s) % m;
        BigUint next = old_s >= qs ? old_s - qs : old_s + m - qs;
        old_s = std::exchange(s, std::move(next));
    }
    if (old_r != BigUint(1)) return std::nullopt;
    return old_s % m;
}

}  // namespace cvlt::rsa
