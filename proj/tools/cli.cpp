#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "cvlt/bytes.hpp"
#include "cvlt/cmac.hpp"
#include "cvlt/csp/backend.hpp"
#include "cvlt/csp/client.hpp"
#include "cvlt/csp/server.hpp"
#include "cvlt/drbg.hpp"
#include "cvlt/envelope.hpp"
#include "cvlt/keyring.hpp"

namespace fs = std::filesystem;

namespace cvlt::cli {

int exit_code_for(Errc code) noexcept {
    switch (code) {
    case Errc::integrity:
    case Errc::format:
    case Errc::key_not_found:
    case Errc::unwrap:
    case Errc::padding:
    case Errc::capacity:
        return kExitCrypto;
    case Errc::io:
    case Errc::parse:
        return kExitIo;
    case Errc::network:
    case Errc::remote:
        return kExitNetwork;
    case Errc::invalid_argument:
    case Errc::seeding:
    case Errc::reseed_required:
    case Errc::quota:
    case Errc::duplicate:
    case Errc::validation:
    case Errc::not_found:
        break;
    }
    return kExitUsage;
}

namespace {

constexpr const char* kIntegrityMessage = "integrity check failed: the object is corrupt or was tampered with";

struct Config {
    std::string keyring_path = "keyring.cvlt-keys";
    std::string server;
    std::string seed_hex;
    std::size_t max_accounts = keyring::kDefaultMaxAccounts;
};

struct Context {
    Config cfg;
    std::ostream& out;
    std::ostream& err;
    std::optional<Bytes> seed;

    bool test_mode() const { return seed.has_value(); }

    keyring::Options keyring_options() const {
        keyring::Options o;
        o.max_accounts = cfg.max_accounts;
        o.test_mode = test_mode();
        if (test_mode()) {
            const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
            o.created_at = epoch ? std::strtoll(epoch, nullptr, 10) : 0;
        }
        return o;
    }

    // With --seed, the counter half of the seed is mixed with a CMAC of the
    // command's inputs, so different commands draw different streams while
    // a repeated command on identical inputs reproduces its output.
    rng::Drbg make_rng(ByteView context) const {
        if (!seed) {
            rng::OsEntropy os;
            return rng::Drbg::from_source(os);
        }
        Bytes material = *seed;
        Bytes msg = *seed;
        append(msg, context);
        const auto tweak = cmac::cmac_tag(msg, Bytes(16, 0));
        for (std::size_t i = 0; i < tweak.size(); ++i) material[32 + i] ^= tweak[i];
        return rng::Drbg::seed(material);
    }
};

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::io, "error reading " + path.string());
    return data;
}

void write_file(const fs::path& path, ByteView data) {
    fs::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io, "cannot write " + path.string());
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!out.flush()) throw Error(Errc::io, "error writing " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::io, "cannot write " + path.string());
    }
}

// A missing keyring file is an empty keyring.
Bytes keyring_bytes(const Context& ctx) {
    std::error_code ec;
    if (!fs::exists(ctx.cfg.keyring_path, ec)) return {};
    return read_file(ctx.cfg.keyring_path);
}

keyring::Keyring load_keyring(const Context& ctx) {
    const Bytes text = keyring_bytes(ctx);
    if (text.empty()) return {};
    return keyring::parse(to_string(text));
}

Bytes context_of(const Context& ctx, std::initializer_list<std::string_view> parts, ByteView tail = {}) {
    Bytes out = keyring_bytes(ctx);
    for (auto p : parts) {
        out.push_back(0);
        append(out, as_bytes(p));
    }
    out.push_back(0);
    append(out, tail);
    return out;
}

const rsa::RsaPublicKey& active_key(const keyring::Keyring& kr, const std::string& account) {
    const auto* acc = kr.find_account(account);
    if (!acc) throw Error(Errc::not_found, "no account named '" + account + "'");
    return acc->active().pub;
}

csp::Endpoint server_endpoint(const Context& ctx) {
    if (ctx.cfg.server.empty()) throw Error(Errc::invalid_argument, "no server given (use --server or CVLT_SERVER)");
    return csp::Endpoint::parse(ctx.cfg.server);
}

std::string fp_hex(const envelope::Fingerprint& fp) { return to_hex(fp); }

void cmd_keygen(Context& ctx, const std::string& account, std::size_t bits) {
    auto kr = load_keyring(ctx);
    auto rng = ctx.make_rng(context_of(ctx, {"keygen", account, std::to_string(bits)}));
    kr = keyring::create_account(std::move(kr), account, bits, rng, ctx.keyring_options());
    keyring::save(kr, ctx.cfg.keyring_path);
    ctx.err << "created account " << account << " (" << bits << "-bit, fingerprint "
            << fp_hex(kr.find_account(account)->active().fingerprint()) << ")\n";
}

void cmd_accounts(Context& ctx) {
    const auto kr = load_keyring(ctx);
    for (const auto& acc : kr.accounts())
        ctx.out << acc.name << "\tgenerations=" << acc.generations.size() << "\tactive=" << fp_hex(acc.active().fingerprint())
                << "\n";
}

void cmd_rotate(Context& ctx, const std::string& account) {
    auto kr = load_keyring(ctx);
    const auto* acc = kr.find_account(account);
    if (!acc) throw Error(Errc::not_found, "no account named '" + account + "'");
    const std::size_t bits = acc->active().pub.bits();
    auto rng = ctx.make_rng(context_of(ctx, {"rotate", account}));
    kr = keyring::rotate(std::move(kr), account, bits, rng, ctx.keyring_options());
    keyring::save(kr, ctx.cfg.keyring_path);
    acc = kr.find_account(account);
    ctx.err << "rotated " << account << " to generation " << acc->active_index << " (fingerprint "
            << fp_hex(acc->active().fingerprint()) << ")\n";
}

Bytes seal_for(Context& ctx, const std::string& account, const Bytes& plaintext, std::string_view label) {
    const auto kr = load_keyring(ctx);
    const auto& pub = active_key(kr, account);
    auto rng = ctx.make_rng(context_of(ctx, {"seal", account, label}, plaintext));
    return envelope::seal(plaintext, pub, rng);
}

void cmd_seal(Context& ctx, const std::string& account, const std::string& in, const std::string& out) {
    const Bytes plaintext = read_file(in);
    write_file(out, seal_for(ctx, account, plaintext, {}));
}

void cmd_open(Context& ctx, const std::string& in, const std::string& out) {
    const Bytes blob = read_file(in);
    const auto kr = load_keyring(ctx);
    write_file(out, envelope::open(blob, kr));
}

int cmd_verify(Context& ctx, const std::string& in) {
    const Bytes blob = read_file(in);
    const auto kr = load_keyring(ctx);
    if (envelope::verify_only(blob, kr)) {
        ctx.out << "OK\n";
        return kExitOk;
    }
    ctx.out << "FAILED\n";
    ctx.err << "cvlt: " << kIntegrityMessage << "\n";
    return kExitCrypto;
}

void cmd_put(Context& ctx, const std::string& account, const std::string& name, const std::string& in) {
    csp::validate_object_name(name);
    const auto ep = server_endpoint(ctx);
    const Bytes plaintext = read_file(in);
    const Bytes blob = seal_for(ctx, account, plaintext, name);
    csp::Client(ep).put(name, blob);
}

void cmd_get(Context& ctx, const std::string& name, const std::string& out) {
    csp::validate_object_name(name);
    const auto ep = server_endpoint(ctx);
    const auto kr = load_keyring(ctx);
    Bytes blob;
    try {
        blob = csp::Client(ep).get(name);
    } catch (const Error& e) {
        if (e.code() == Errc::not_found) throw Error(Errc::remote, "no object named '" + name + "' on the server");
        throw;
    }
    write_file(out, envelope::open(blob, kr));
}

// Runs until SIGINT or SIGTERM.
void cmd_serve(Context& ctx, const std::string& addr, const std::string& backend_kind, const std::string& root) {
    std::unique_ptr<csp::Backend> backend;
    if (backend_kind == "mem") {
        backend = std::make_unique<csp::MemoryBackend>();
    } else {
        if (root.empty()) throw Error(Errc::invalid_argument, "--backend dir needs --root");
        backend = std::make_unique<csp::DirectoryBackend>(root);
    }

    sigset_t sigs;
    sigemptyset(&sigs);
    sigaddset(&sigs, SIGINT);
    sigaddset(&sigs, SIGTERM);
    sigset_t old;
    pthread_sigmask(SIG_BLOCK, &sigs, &old);

    csp::Server server(*backend, csp::Endpoint::parse(addr));
    ctx.err << "serving on " << csp::Endpoint{csp::Endpoint::parse(addr).host, server.port()}.to_string()
            << " (" << backend_kind << " backend)" << std::endl;

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&sigs, &sig);
        server.stop();
    });
    server.run();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    pthread_sigmask(SIG_SETMASK, &old, nullptr);
    ctx.err << "server stopped" << std::endl;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Client-side encrypted storage with AES and RSA-wrapped keys", "cvlt"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    if (const char* env = std::getenv("CVLT_KEYRING"); env && *env) cfg.keyring_path = env;
    if (const char* env = std::getenv("CVLT_SERVER"); env && *env) cfg.server = env;
    app.add_option("--keyring", cfg.keyring_path, "Keyring file (env CVLT_KEYRING)")->capture_default_str();
    app.add_option("--server", cfg.server, "CSP address HOST:PORT (env CVLT_SERVER)");
    app.add_option("--seed", cfg.seed_hex, "Hex seed of at least 48 bytes; deterministic test mode");
    app.add_option("--max-accounts", cfg.max_accounts, "Account limit for this keyring")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::string account, in, out_path, name, addr = "127.0.0.1:7433", backend_kind = "mem", root;
    std::size_t bits = 2048;

    auto* keygen = app.add_subcommand("keygen", "Create an account with a fresh RSA key");
    keygen->add_option("--account", account, "Account name")->required();
    keygen->add_option("--bits", bits, "RSA modulus size (1024, 2048 or 3072)")->capture_default_str();

    auto* accounts = app.add_subcommand("accounts", "List accounts");

    auto* rotate = app.add_subcommand("rotate", "Add a new active key generation to an account");
    rotate->add_option("--account", account, "Account name")->required();

    auto* seal = app.add_subcommand("seal", "Encrypt a file for an account");
    seal->add_option("--account", account, "Account name")->required();
    seal->add_option("--in", in, "Plaintext file")->required();
    seal->add_option("--out", out_path, "Sealed output file")->required();

    auto* open = app.add_subcommand("open", "Decrypt a sealed file with any key in the keyring");
    open->add_option("--in", in, "Sealed file")->required();
    open->add_option("--out", out_path, "Plaintext output file")->required();

    auto* verify = app.add_subcommand("verify", "Check a sealed file's integrity without decrypting");
    verify->add_option("--in", in, "Sealed file")->required();

    auto* put = app.add_subcommand("put", "Seal a file and upload it");
    put->add_option("--account", account, "Account name")->required();
    put->add_option("--name", name, "Object name")->required();
    put->add_option("--in", in, "Plaintext file")->required();

    auto* get = app.add_subcommand("get", "Download an object and open it");
    get->add_option("--name", name, "Object name")->required();
    get->add_option("--out", out_path, "Plaintext output file")->required();

    auto* serve = app.add_subcommand("serve", "Run the storage server");
    serve->add_option("--addr", addr, "Listen address HOST:PORT")->capture_default_str();
    serve->add_option("--backend", backend_kind, "Storage backend")
        ->capture_default_str()
        ->check(CLI::IsMember({"mem", "dir"}));
    serve->add_option("--root", root, "Directory for the dir backend");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    Context ctx{cfg, out, err, std::nullopt};
    try {
        if (!cfg.seed_hex.empty()) {
            ctx.seed = from_hex(cfg.seed_hex);
            if (ctx.seed->size() < rng::kSeedBytes)
                throw Error(Errc::seeding, "--seed needs at least 48 bytes (96 hex digits)");
        }
        if (*keygen) cmd_keygen(ctx, account, bits);
        else if (*accounts) cmd_accounts(ctx);
        else if (*rotate) cmd_rotate(ctx, account);
        else if (*seal) cmd_seal(ctx, account, in, out_path);
        else if (*open) cmd_open(ctx, in, out_path);
        else if (*verify) return cmd_verify(ctx, in);
        else if (*put) cmd_put(ctx, account, name, in);
        else if (*get) cmd_get(ctx, name, out_path);
        else if (*serve) cmd_serve(ctx, addr, backend_kind, root);
        return kExitOk;
    } catch (const Error& e) {
        switch (e.code()) {
        case Errc::integrity:
        case Errc::format:
        case Errc::unwrap:
        case Errc::padding:
            err << "cvlt: " << kIntegrityMessage << "\n";
            break;
        case Errc::key_not_found:
            err << "cvlt: no key in the keyring matches this object\n";
            break;
        default:
            err << "cvlt: " << e.what() << "\n";
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "cvlt: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace cvlt::cli
