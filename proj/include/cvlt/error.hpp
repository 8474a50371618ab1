#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvlt {

// Failure categories shared across the library. The CLI maps these onto its
// exit-code contract, so keep the set small and stable.
enum class Errc {
    invalid_argument,  // bad parameter, wrong block/key size, missing IV
    format,            // malformed encoding (envelope header, truncated data)
    padding,           // PKCS#7 padding did not validate
    unwrap,            // RSA key-wrap frame did not validate
    integrity,         // uniform "this ciphertext is not authentic"
    key_not_found,     // no private key for the envelope's fingerprint
    capacity,          // payload too large for an RSA modulus
    seeding,           // DRBG given too little entropy
    reseed_required,   // DRBG exhausted its block budget
    quota,             // keyring account limit reached
    duplicate,         // name already present
    validation,        // input violates a naming or structural rule
    not_found,         // named account or object does not exist
    parse,             // text file could not be parsed
    io,                // filesystem failure
    network,           // socket or protocol failure
    remote,            // CSP answered with a non-OK status
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cvlt
