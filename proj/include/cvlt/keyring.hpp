#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvlt/drbg.hpp"
#include "cvlt/envelope.hpp"
#include "cvlt/rsa.hpp"

namespace cvlt::keyring {

inline constexpr std::size_t kDefaultMaxAccounts = 5;
inline constexpr int kFormatVersion = 1;
inline constexpr std::size_t kMaxAccountNameBytes = 64;

struct Generation {
    rsa::RsaPublicKey pub;
    rsa::RsaPrivateKey priv;
    std::int64_t created = 0;  // UNIX seconds

    envelope::Fingerprint fingerprint() const { return envelope::fingerprint(pub); }

    friend bool operator==(const Generation&, const Generation&) = default;
};

struct Account {
    std::string name;
    std::vector<Generation> generations;
    std::size_t active_index = 0;

    const Generation& active() const { return generations.at(active_index); }

    friend bool operator==(const Account&, const Account&) = default;
};

struct Options {
    std::size_t max_accounts = kDefaultMaxAccounts;
    // Allows 512-bit keys.
    bool test_mode = false;
    // Creation timestamp for new generations; the system clock when empty.
    std::optional<std::int64_t> created_at;
};

// Named accounts ("zones"), each with an append-only list of RSA key
// generations. A value type: the operations below return an updated copy and
// never remove a generation.
class Keyring {
public:
    Keyring() = default;

    const std::vector<Account>& accounts() const noexcept { return accounts_; }
    const Account* find_account(std::string_view name) const noexcept;
    std::size_t generation_count() const noexcept;

    friend bool operator==(const Keyring&, const Keyring&) = default;

private:
    friend Keyring create_account(Keyring, std::string_view, std::size_t, rng::Drbg&, const Options&);
    friend Keyring rotate(Keyring, std::string_view, std::size_t, rng::Drbg&, const Options&);
    friend Keyring parse(std::string_view);

    std::vector<Account> accounts_;
};

// 1-64 bytes of well-formed UTF-8 without control characters. Throws
// Errc::validation.
void validate_account_name(std::string_view name);

// Errc::validation for a bad name, Errc::duplicate for a name in use,
// Errc::quota at the account limit.
Keyring create_account(Keyring kr, std::string_view name, std::size_t bits, rng::Drbg& rng,
                       const Options& options = {});

// Appends a fresh generation and makes it active. Errc::not_found for an
// unknown account.
Keyring rotate(Keyring kr, std::string_view name, std::size_t bits, rng::Drbg& rng, const Options& options = {});

// Searches every generation of every account.
std::optional<rsa::RsaPrivateKey> find_private_by_fingerprint(const Keyring& kr, const envelope::Fingerprint& fp);

// Deterministic text encoding:
//   version=1
//   account=<name>
//   active=<index>
//   key.<i>.n=<hex>  (also e, d, p, q)
//   key.<i>.created=<decimal>
std::string serialize(const Keyring& kr);
// Errc::parse (with line number) for malformed text, Errc::validation for
// duplicate names or fingerprints and inconsistent keys.
Keyring parse(std::string_view text);

// Writes through a temporary file and rename, mode 0600. Errc::io on failure.
void save(const Keyring& kr, const std::filesystem::path& path);
// Errc::io if the file cannot be read.
Keyring load(const std::filesystem::path& path);

}  // namespace cvlt::keyring
