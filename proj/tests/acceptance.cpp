// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// all of them pass.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>

#include "cvlt/aes.hpp"
#include "cvlt/cmac.hpp"
#include "cvlt/csp/backend.hpp"
#include "cvlt/csp/client.hpp"
#include "cvlt/envelope.hpp"
#include "cvlt/error.hpp"
#include "cvlt/gf256.hpp"
#include "cvlt/keyring.hpp"
#include "cvlt/modes.hpp"
#include "cvlt/rsa.hpp"
#include "support/cli_runner.hpp"
#include "support/csp_harness.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace cvlt;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failed expectations for one criterion.
class Report {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += !ok;
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }

    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::string s = std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) + " checks";
        if (!notes_.empty()) s += "; " + notes_;
        for (const auto& f : failures_) s += "\n      failed: " + f;
        return s;
    }

private:
    std::size_t checks_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
    std::string notes_;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << v;
    return s.str();
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<Errc>(-1);
}

Bytes seq(std::size_t n) {
    Bytes b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i);
    return b;
}

Bytes block_bytes(const aes::Block& b) { return Bytes(b.begin(), b.end()); }

aes::KeySize sizes[] = {aes::KeySize::aes128, aes::KeySize::aes192, aes::KeySize::aes256};

void round_count_law(Report& r) {
    const std::size_t expected[] = {11, 13, 15};
    for (int i = 0; i < 3; ++i) {
        const std::size_t len = aes::key_bytes(sizes[i]);
        const auto ks = aes::expand_key(testing::random_bytes(len));
        r.expect(ks.round_keys().size() == expected[i],
                 std::to_string(len) + "-byte key gave " + std::to_string(ks.round_keys().size()) + " round keys");
        r.expect(ks.rounds() == static_cast<int>(expected[i]) - 1, "rounds() for " + std::to_string(len));
        const auto words = oracle::aes_key_schedule_words(seq(len));
        r.expect(words.size() == 4 * expected[i], "oracle schedule length for " + std::to_string(len));
    }
}

void known_answers(Report& r) {
    const Bytes pt = oracle::unhex("00112233445566778899aabbccddeeff");
    const char* published[] = {"69c4e0d86a7b0430d8cdb78070b4c55a", "dda97ca4864cdfe06eaf70a0ec0d7191",
                               "8ea2b7ca516745bfeafc49904b496089"};
    for (int i = 0; i < 3; ++i) {
        const Bytes key = seq(aes::key_bytes(sizes[i]));
        const Bytes expected = oracle::aes_ecb_encrypt(key, pt);
        r.expect(oracle::hex(expected) == published[i], "oracle disagrees with published vector");
        r.expect(block_bytes(aes::encrypt_block(pt, aes::expand_key(key))) == expected,
                 "canonical vector for " + std::to_string(key.size()) + "-byte key");
    }
    int mismatches = 0;
    for (int n = 0; n < 10000; ++n) {
        const aes::KeySize size = sizes[n % 3];
        const Bytes key = testing::random_bytes(aes::key_bytes(size));
        const Bytes block = testing::random_bytes(16);
        mismatches += block_bytes(aes::encrypt_block(block, aes::expand_key(key))) != oracle::aes_ecb_encrypt(key, block);
    }
    r.expect(mismatches == 0, std::to_string(mismatches) + " random pairs disagree with OpenSSL");
    r.note("10000 random pairs across all key sizes");
}

void field_exhaustives(Report& r) {
    using namespace cvlt::gf256;
    int bad_inverse = 0, bad_xtime = 0;
    for (int a = 1; a < 256; ++a) {
        const auto b = static_cast<std::uint8_t>(a);
        bad_inverse += gf_mul(b, gf_inv(b)) != 1;
        bad_inverse += oracle::gf_mul(b, gf_inv(b)) != 1;
    }
    for (int a = 0; a < 256; ++a) {
        const auto b = static_cast<std::uint8_t>(a);
        bad_xtime += xtime(b) != gf_mul(b, 2);
        bad_xtime += xtime(b) != oracle::gf_mul(b, 2);
    }
    r.expect(bad_inverse == 0, "gf_mul(a, gf_inv(a)) != 1 for some a");
    r.expect(bad_xtime == 0, "xtime differs from gf_mul(., 2)");

    const auto& s = sbox();
    std::array<bool, 256> hit{};
    int bad_entry = 0;
    for (int x = 0; x < 256; ++x) {
        hit[s.forward[x]] = true;
        bad_entry += s.forward[x] != oracle::sbox_entry(static_cast<std::uint8_t>(x));
        bad_entry += s.inverse[s.forward[x]] != x;
    }
    r.expect(std::all_of(hit.begin(), hit.end(), [](bool h) { return h; }), "S-box is not a bijection");
    r.expect(bad_entry == 0, "S-box entries disagree with the oracle or inverse table");
}

void inverse_cipher(Report& r) {
    int bad = 0;
    for (auto size : sizes) {
        for (int i = 0; i < 1000; ++i) {
            const auto ks = aes::expand_key(testing::random_bytes(aes::key_bytes(size)));
            const auto p = testing::random_block();
            bad += aes::decrypt_block(aes::encrypt_block(p, ks), ks) != p;
        }
    }
    r.expect(bad == 0, std::to_string(bad) + " decrypt(encrypt(p)) != p");

    int sub = 0, shift = 0, mix = 0, ark = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto s = testing::random_state();
        sub += aes::inv_sub_bytes(aes::sub_bytes(s)) != s || aes::sub_bytes(aes::inv_sub_bytes(s)) != s;
        shift += aes::inv_shift_rows(aes::shift_rows(s)) != s || aes::shift_rows(aes::inv_shift_rows(s)) != s;
        mix += aes::inv_mix_columns(aes::mix_columns(s)) != s || aes::mix_columns(aes::inv_mix_columns(s)) != s;
        const auto rk = testing::random_block();
        ark += aes::add_round_key(aes::add_round_key(s, rk), rk) != s;
    }
    r.expect(sub == 0, "SubBytes inverse law");
    r.expect(shift == 0, "ShiftRows inverse law");
    r.expect(mix == 0, "MixColumns inverse law");
    r.expect(ark == 0, "AddRoundKey involution");
}

void avalanche(Report& r) {
    auto& g = testing::gen();
    std::uniform_int_distribution<int> bitdist(0, 127);
    const int trials = 1000;
    double plain = 0, key = 0;
    for (int i = 0; i < trials; ++i) {
        const Bytes k = testing::random_bytes(16);
        const auto ks = aes::expand_key(k);
        const auto p = testing::random_block();
        const auto c = aes::encrypt_block(p, ks);

        auto p2 = p;
        const int pb = bitdist(g);
        p2[pb / 8] ^= static_cast<std::uint8_t>(1 << (pb % 8));
        plain += testing::popcount_diff(c, aes::encrypt_block(p2, ks)) / 128.0;

        Bytes k2 = k;
        const int kb = bitdist(g);
        k2[kb / 8] ^= static_cast<std::uint8_t>(1 << (kb % 8));
        key += testing::popcount_diff(c, aes::encrypt_block(p, aes::expand_key(k2))) / 128.0;
    }
    plain /= trials;
    key /= trials;
    r.expect(plain >= 0.45 && plain <= 0.55, "plaintext avalanche " + fmt(plain));
    r.expect(key >= 0.45 && key <= 0.55, "key avalanche " + fmt(key));
    r.note("plaintext flips " + fmt(plain) + ", key flips " + fmt(key) + " over 1000 each");
}

void mode_round_trips(Report& r) {
    using modes::CipherMode;
    for (auto mode : {CipherMode::ecb, CipherMode::cbc, CipherMode::ctr}) {
        int bad = 0;
        for (int i = 0; i < 500; ++i) {
            const Bytes key = testing::random_bytes(aes::key_bytes(sizes[i % 3]));
            const Bytes msg = testing::random_bytes(testing::random_size(0, 4096));
            std::optional<modes::Iv> iv;
            if (mode != CipherMode::ecb) iv = modes::Iv::from(testing::random_bytes(16));
            const Bytes ct = modes::mode_encrypt(msg, key, mode, iv);
            bad += modes::mode_decrypt(ct, key, mode, iv) != msg;
            if (mode == CipherMode::cbc) bad += ct != oracle::aes_cbc_encrypt(key, block_bytes(iv->bytes()), msg);
            if (mode == CipherMode::ctr) bad += ct != oracle::aes_ctr_encrypt(key, block_bytes(iv->bytes()), msg);
        }
        r.expect(bad == 0, "mode " + std::to_string(static_cast<int>(mode)) + " had " + std::to_string(bad) + " failures");
    }
    int cbc_ecb = 0;
    for (int i = 0; i < 100; ++i) {
        const Bytes key = testing::random_bytes(16);
        const Bytes block = testing::random_bytes(16);
        const Bytes cbc = modes::mode_encrypt(block, key, CipherMode::cbc, modes::Iv{});
        const Bytes ecb = modes::mode_encrypt(block, key, CipherMode::ecb);
        cbc_ecb += !std::equal(cbc.begin(), cbc.begin() + 16, ecb.begin());
        cbc_ecb += !std::equal(cbc.begin(), cbc.begin() + 16, block_bytes(aes::encrypt_block(block, aes::expand_key(key))).begin());
    }
    r.expect(cbc_ecb == 0, "CBC(IV=0, one block) != ECB(block)");
}

void cmac_vector(Report& r) {
    const Bytes key = oracle::unhex("2b7e151628aed2a6abf7158809cf4f3c");
    const Bytes expected = oracle::aes_cmac(key, {});
    r.expect(oracle::hex(expected) == "bb1d6929e95937287fa37d129b756746", "oracle disagrees with the published tag");
    const auto tag = cmac::cmac_tag(Bytes{}, key);
    r.expect(block_bytes(tag) == expected, "empty-message tag");
    r.expect(cmac::cmac_verify(Bytes{}, key, tag), "genuine tag rejected");

    int accepted = 0;
    for (int bit = 0; bit < 128; ++bit) {
        auto bad = tag;
        bad[bit / 8] ^= static_cast<std::uint8_t>(1 << (bit % 8));
        accepted += cmac::cmac_verify(Bytes{}, key, bad);
    }
    const Bytes msg = testing::random_bytes(64);
    const auto mtag = cmac::cmac_tag(msg, key);
    for (int bit = 0; bit < 512; ++bit) {
        Bytes bad = msg;
        bad[bit / 8] ^= static_cast<std::uint8_t>(1 << (bit % 8));
        accepted += cmac::cmac_verify(bad, key, mtag);
    }
    r.expect(accepted == 0, std::to_string(accepted) + " bit flips still verified");
    r.note("all 128 tag-bit and 512 message-bit flips");
}

void rsa_correctness(Report& r) {
    using rsa::BigUint;
    r.expect(rsa::mod_pow(BigUint(65), BigUint(17), BigUint(3233)) == BigUint(2790), "65^17 mod 3233");
    r.expect(rsa::mod_pow(BigUint(2790), BigUint(2753), BigUint(3233)) == BigUint(65), "2790^2753 mod 3233");
    r.expect(oracle::mod_pow_naive(65, 17, 3233) == 2790, "oracle 65^17 mod 3233");

    auto rng = testing::test_drbg(80);
    const auto t0 = Clock::now();
    rsa::KeygenOptions opts;
    opts.test_mode = true;
    const auto kp = rsa::keygen(512, rng, opts);
    const double keygen_s = seconds_since(t0);
    r.expect(keygen_s < 10.0, "512-bit keygen took " + fmt(keygen_s) + " s");
    r.expect(kp.pub.bits() == 512, "modulus is not 512 bits");

    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const BigUint m = rsa::random_below(kp.pub.n, rng);
        const BigUint c = rsa::mod_pow(m, kp.pub.e, kp.pub.n);
        bad += rsa::mod_pow(c, kp.priv.d, kp.pub.n) != m;
        bad += oracle::gmp_powm(c.to_hex(), kp.priv.d.to_hex(), kp.pub.n.to_hex()) != m.to_hex();
    }
    r.expect(bad == 0, "inverse law failed on " + std::to_string(bad) + " messages");

    int disagree = 0;
    for (std::uint64_t n = 0; n < 100000; ++n)
        disagree += rsa::is_probable_prime(BigUint(n), rsa::kDefaultMillerRabinRounds, rng) != oracle::is_prime_trial(n);
    r.expect(disagree == 0, std::to_string(disagree) + " primality disagreements below 1e5");
    r.note("keygen " + fmt(keygen_s, 3) + " s");
}

keyring::Options ring_options() {
    keyring::Options o;
    o.test_mode = true;
    o.created_at = 0;
    return o;
}

void tamper_suite(Report& r) {
    auto rng = testing::test_drbg(90);
    const auto kr = keyring::create_account({}, "zone", 512, rng, ring_options());
    const auto& pub = kr.accounts().front().active().pub;
    const Bytes plaintext = testing::random_bytes(40);
    const Bytes blob = envelope::seal(plaintext, pub, rng);
    r.expect(envelope::parse(blob).header.ct_len == 48, "sealed object is not three blocks");
    r.expect(envelope::open(blob, kr) == plaintext, "pristine object does not open");

    std::size_t trials = 0, undetected = 0, bad_code = 0;
    for (std::size_t pos = 0; pos < blob.size(); ++pos) {
        const bool in_fingerprint = pos >= 6 && pos < 14;
        for (int delta = 1; delta < 256; ++delta) {
            Bytes bad = blob;
            bad[pos] ^= static_cast<std::uint8_t>(delta);
            ++trials;
            try {
                (void)envelope::open(bad, kr);
                ++undetected;
            } catch (const Error& e) {
                const bool expected = e.code() == Errc::integrity || e.code() == Errc::format ||
                                      (in_fingerprint && e.code() == Errc::key_not_found);
                bad_code += !expected;
            }
        }
    }
    r.expect(undetected == 0, std::to_string(undetected) + " corruptions opened silently");
    r.expect(bad_code == 0, std::to_string(bad_code) + " corruptions raised an unexpected error");

    std::size_t truncations = 0;
    for (std::size_t len = 0; len < blob.size(); ++len) {
        const Errc c = code_of([&] { (void)envelope::open(ByteView(blob.data(), len), kr); });
        truncations += c == Errc::format || c == Errc::integrity;
    }
    r.expect(truncations == blob.size(), "a truncation was not rejected");

    // Same sweep with one delta per byte under a full-size key.
    auto rng2 = testing::test_drbg(91);
    const auto big = keyring::create_account({}, "zone", 2048, rng2, ring_options());
    const Bytes big_blob = envelope::seal(plaintext, big.accounts().front().active().pub, rng2);
    std::size_t big_undetected = 0;
    for (std::size_t pos = 0; pos < big_blob.size(); ++pos) {
        Bytes bad = big_blob;
        bad[pos] ^= 0xa5;
        const Errc c = code_of([&] { (void)envelope::open(bad, big); });
        big_undetected += !(c == Errc::integrity || c == Errc::format || (pos >= 6 && pos < 14 && c == Errc::key_not_found));
    }
    r.expect(big_undetected == 0, "2048-bit sweep missed " + std::to_string(big_undetected));
    r.note(std::to_string(trials) + " single-byte corruptions of a " + std::to_string(blob.size()) +
           "-byte object, " + std::to_string(blob.size()) + " truncations, " + std::to_string(big_blob.size()) +
           " corruptions under 2048-bit key");
}

fs::path scratch(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("cvlt-acceptance-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Bytes slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spill(const fs::path& p, const Bytes& data) {
    std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(data.data()),
                                             static_cast<std::streamsize>(data.size()));
}

void rotation(Report& r) {
    auto rng = testing::test_drbg(100);
    auto kr = keyring::create_account({}, "alpha", 512, rng, ring_options());
    const Bytes msg = testing::random_bytes(777);
    const Bytes old_blob = envelope::seal(msg, kr.find_account("alpha")->active().pub, rng);
    const auto old_fp = kr.find_account("alpha")->active().fingerprint();

    kr = keyring::rotate(std::move(kr), "alpha", 512, rng, ring_options());
    const auto new_fp = kr.find_account("alpha")->active().fingerprint();
    r.expect(new_fp != old_fp, "rotation kept the old fingerprint");
    r.expect(envelope::open(old_blob, kr) == msg, "pre-rotation object does not open");
    const Bytes new_blob = envelope::seal(msg, kr.find_account("alpha")->active().pub, rng);
    r.expect(envelope::parse(new_blob).header.key_fingerprint == new_fp, "post-rotation seal uses the old key");
    r.expect(envelope::parse(old_blob).header.key_fingerprint == old_fp, "old object fingerprint");
    r.expect(envelope::open(new_blob, kr) == msg, "post-rotation object does not open");

    auto reloaded = keyring::parse(keyring::serialize(kr));
    r.expect(envelope::open(old_blob, reloaded) == msg, "old generation lost across save/load");

    keyring::Keyring five;
    for (int i = 0; i < 5; ++i) five = keyring::create_account(std::move(five), "a" + std::to_string(i), 512, rng, ring_options());
    r.expect(code_of([&] { (void)keyring::create_account(five, "a5", 512, rng, ring_options()); }) == Errc::quota,
             "sixth account accepted");
    auto six_opts = ring_options();
    six_opts.max_accounts = 6;
    r.expect(code_of([&] { (void)keyring::create_account(five, "a5", 512, rng, six_opts); }) == static_cast<Errc>(-1),
             "raised limit not honoured");

    const fs::path dir = scratch("rotation");
    const std::string ring = (dir / "ring").string();
    const std::string seed = testing::fixed_seed_hex(0x33);
    for (int i = 0; i < 5; ++i)
        r.expect(testing::run_cli({"--keyring", ring, "--seed", seed, "keygen", "--account", "c" + std::to_string(i), "--bits", "512"}).rc == 0,
                 "cli keygen #" + std::to_string(i + 1));
    const auto sixth = testing::run_cli({"--keyring", ring, "--seed", seed, "keygen", "--account", "c5", "--bits", "512"});
    r.expect(sixth.rc == 1 && sixth.err.find("5 accounts") != std::string::npos, "cli sixth keygen: exit 1 with quota message");
    r.expect(testing::run_cli({"--keyring", ring, "--seed", seed, "--max-accounts", "6", "keygen", "--account", "c5", "--bits", "512"}).rc == 0,
             "cli --max-accounts 6");
    fs::remove_all(dir);
}

void end_to_end(Report& r) {
    const fs::path dir = scratch("e2e");
    csp::DirectoryBackend backend(dir / "store");
    testing::RunningServer server(backend);
    const std::string srv = server.endpoint().to_string();
    const std::string ring = (dir / "ring").string();

    const auto kg = testing::run_cli({"--keyring", ring, "keygen", "--account", "sender", "--bits", "2048"});
    r.expect(kg.rc == 0, "keygen: " + kg.err);

    Bytes sentinel(64);
    for (std::size_t i = 0; i < sentinel.size(); ++i) sentinel[i] = static_cast<std::uint8_t>("SENTINEL-"[i % 9]);
    std::size_t max_size = 0;
    for (std::size_t size : {std::size_t{0}, std::size_t{64}, std::size_t{65}, std::size_t{4096}, std::size_t{1 << 20},
                             std::size_t{(10 << 20) - 1}, std::size_t{10 << 20}}) {
        Bytes pt = testing::random_bytes(size);
        if (size >= sentinel.size()) std::copy(sentinel.begin(), sentinel.end(), pt.begin() + static_cast<std::ptrdiff_t>((size - 64) / 2));
        spill(dir / "in", pt);
        const std::string name = "files/" + std::to_string(size);
        const auto put = testing::run_cli({"--keyring", ring, "--server", srv, "put", "--account", "sender", "--name", name, "--in", (dir / "in").string()});
        const auto get = testing::run_cli({"--keyring", ring, "--server", srv, "get", "--name", name, "--out", (dir / "out").string()});
        r.expect(put.rc == 0 && get.rc == 0, "put/get exit codes for " + std::to_string(size) + " bytes");
        r.expect(slurp(dir / "out") == pt, "round trip of " + std::to_string(size) + " bytes");
        r.expect(backend.get(name) == csp::Client(server.endpoint()).get(name), "stored bytes differ from served bytes");
        max_size = std::max(max_size, size);
    }

    std::size_t files = 0, leaks = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir / "store")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const Bytes stored = slurp(e.path());
        leaks += std::search(stored.begin(), stored.end(), sentinel.begin(), sentinel.end()) != stored.end();
    }
    r.expect(files == 7, "expected 7 stored objects, found " + std::to_string(files));
    r.expect(leaks == 0, "sentinel found in " + std::to_string(leaks) + " stored files");

    // Tampering with a stored file is caught at the receiver.
    const fs::path victim = backend.path_for("files/4096");
    Bytes blob = slurp(victim);
    blob[blob.size() - 40] ^= 0x01;
    spill(victim, blob);
    r.expect(testing::run_cli({"--keyring", ring, "--server", srv, "get", "--name", "files/4096", "--out", (dir / "out").string()}).rc == 2,
             "tampered object did not exit 2");

    csp::MemoryBackend m1, m2;
    testing::RunningServer s1(m1), s2(m2);
    const std::string seed = testing::fixed_seed_hex();
    const std::string t1 = testing::seeded_transcript(dir / "t1", s1.endpoint(), seed);
    const std::string t2 = testing::seeded_transcript(dir / "t2", s2.endpoint(), seed);
    r.expect(t1 == t2, "seeded transcripts differ");
    r.expect(t1.find("## roundtrip 1 1") != std::string::npos, "seeded transcript round trip");
    const Bytes golden = slurp(fs::path(CVLT_GOLDEN_DIR) / "seeded_transcript.txt");
    r.expect(to_string(golden) == t1, "seeded transcript differs from the golden file");
    r.note("files 0 B to " + std::to_string(max_size) + " B, " + std::to_string(files) + " stored objects scanned");
    fs::remove_all(dir);
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0 for no bound
    std::function<void(Report&)> run;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "round-count law (11/13/15 round keys)", 1, round_count_law},
        {2, "known-answer equivalence with an independent AES", 10, known_answers},
        {3, "GF(2^8) exhaustives and S-box bijectivity", 1, field_exhaustives},
        {4, "inverse cipher and per-transform inverses", 5, inverse_cipher},
        {5, "avalanche within [0.45, 0.55]", 10, avalanche},
        {6, "ECB/CBC/CTR round trips and CBC(IV=0)=ECB", 10, mode_round_trips},
        {7, "CMAC empty-message vector and bit-flip rejection", 1, cmac_vector},
        {8, "RSA arithmetic, 512-bit keygen, primality", 0, rsa_correctness},
        {9, "envelope tamper and truncation suite", 30, tamper_suite},
        {10, "rotation semantics and account quota", 0, rotation},
        {11, "end-to-end put/get over loopback TCP", 60, end_to_end},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Report report;
        const auto t0 = Clock::now();
        try {
            c.run(report);
        } catch (const std::exception& e) {
            report.expect(false, std::string("exception: ") + e.what());
        }
        const double elapsed = seconds_since(t0);
        if (c.budget_s > 0) report.expect(elapsed < c.budget_s, "took " + fmt(elapsed, 2) + " s, bound " + fmt(c.budget_s, 0) + " s");
        failed += !report.ok();
        std::printf("%s  criterion %2d  %-50s %7.2f s  %s\n", report.ok() ? "PASS" : "FAIL", c.id, c.title, elapsed,
                    report.summary().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
