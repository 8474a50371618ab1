#include "cvlt/keyring.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cvlt/error.hpp"

namespace cvlt::keyring {

namespace fs = std::filesystem;

const Account* Keyring::find_account(std::string_view name) const noexcept {
    for (const auto& a : accounts_)
        if (a.name == name) return &a;
    return nullptr;
}

std::size_t Keyring::generation_count() const noexcept {
    std::size_t n = 0;
    for (const auto& a : accounts_) n += a.generations.size();
    return n;
}

namespace {

// Length of the UTF-8 sequence starting at s[i], or 0 if it is malformed.
std::size_t utf8_sequence(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) return 1;
    if ((b0 & 0xe0) == 0xc0) len = 2, cp = b0 & 0x1f;
    else if ((b0 & 0xf0) == 0xe0) len = 3, cp = b0 & 0x0f;
    else if ((b0 & 0xf8) == 0xf0) len = 4, cp = b0 & 0x07;
    else return 0;
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xc0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3f);
    }
    static constexpr std::uint32_t min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return 0;
    if (cp >= 0x80 && cp <= 0x9f) return 0;  // C1 controls
    return len;
}

std::int64_t now_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

Generation new_generation(const Keyring& kr, std::size_t bits, rng::Drbg& rng, const Options& options) {
    rsa::KeygenOptions keygen_options;
    keygen_options.test_mode = options.test_mode;
    auto kp = rsa::keygen(bits, rng, keygen_options);
    Generation g{std::move(kp.pub), std::move(kp.priv), options.created_at.value_or(now_seconds())};
    const auto fp = g.fingerprint();
    for (const auto& a : kr.accounts())
        for (const auto& existing : a.generations)
            if (existing.fingerprint() == fp)
                throw Error(Errc::validation, "generated key collides with an existing fingerprint");
    return g;
}

}  // namespace

void validate_account_name(std::string_view name) {
    if (name.empty() || name.size() > kMaxAccountNameBytes)
        throw Error(Errc::validation, "account name must be 1-64 bytes");
    for (std::size_t i = 0; i < name.size();) {
        const auto c = static_cast<unsigned char>(name[i]);
        if (c < 0x20 || c == 0x7f) throw Error(Errc::validation, "account name contains a control character");
        const std::size_t len = utf8_sequence(name, i);
        if (len == 0) throw Error(Errc::validation, "account name is not valid UTF-8");
        i += len;
    }
}

Keyring create_account(Keyring kr, std::string_view name, std::size_t bits, rng::Drbg& rng, const Options& options) {
    validate_account_name(name);
    if (kr.find_account(name)) throw Error(Errc::duplicate, "account '" + std::string(name) + "' already exists");
    if (kr.accounts_.size() >= options.max_accounts)
        throw Error(Errc::quota, "account limit reached: this keyring allows " + std::to_string(options.max_accounts) +
                                     " accounts (default five per client; raise with --max-accounts)");
    Account account{std::string(name), {new_generation(kr, bits, rng, options)}, 0};
    kr.accounts_.push_back(std::move(account));
    return kr;
}

Keyring rotate(Keyring kr, std::string_view name, std::size_t bits, rng::Drbg& rng, const Options& options) {
    auto it = std::find_if(kr.accounts_.begin(), kr.accounts_.end(), [&](const Account& a) { return a.name == name; });
    if (it == kr.accounts_.end()) throw Error(Errc::not_found, "no account named '" + std::string(name) + "'");
    auto g = new_generation(kr, bits, rng, options);
    it->generations.push_back(std::move(g));
    it->active_index = it->generations.size() - 1;
    return kr;
}

std::optional<rsa::RsaPrivateKey> find_private_by_fingerprint(const Keyring& kr, const envelope::Fingerprint& fp) {
    for (const auto& a : kr.accounts())
        for (const auto& g : a.generations)
            if (g.fingerprint() == fp) return g.priv;
    return std::nullopt;
}

std::string serialize(const Keyring& kr) {
    std::string out = "version=" + std::to_string(kFormatVersion) + "\n";
    for (const auto& a : kr.accounts()) {
        out += "account=" + a.name + "\n";
        out += "active=" + std::to_string(a.active_index) + "\n";
        for (std::size_t i = 0; i < a.generations.size(); ++i) {
            const auto& g = a.generations[i];
            const std::string prefix = "key." + std::to_string(i) + ".";
            out += prefix + "n=" + g.priv.n.to_hex() + "\n";
            out += prefix + "e=" + g.priv.e.to_hex() + "\n";
            out += prefix + "d=" + g.priv.d.to_hex() + "\n";
            out += prefix + "p=" + g.priv.p.to_hex() + "\n";
            out += prefix + "q=" + g.priv.q.to_hex() + "\n";
            out += prefix + "created=" + std::to_string(g.created) + "\n";
        }
    }
    return out;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
    throw Error(Errc::parse, "keyring line " + std::to_string(line) + ": " + msg);
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line) {
    Int v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) parse_fail(line, "invalid number");
    return v;
}

struct PendingAccount {
    std::string name;
    std::optional<std::size_t> active;
    std::size_t line = 0;
    // index -> field -> (value, line)
    std::map<std::size_t, std::map<std::string, std::string, std::less<>>> keys;
};

Account finish_account(PendingAccount&& p) {
    if (!p.active) parse_fail(p.line, "account '" + p.name + "' has no active= line");
    Account a{std::move(p.name), {}, *p.active};
    std::size_t expect = 0;
    for (auto& [index, fields] : p.keys) {
        if (index != expect++) parse_fail(p.line, "key generations of '" + a.name + "' are not numbered from 0");
        for (const char* f : {"n", "e", "d", "p", "q", "created"})
            if (!fields.count(f))
                parse_fail(p.line, "generation " + std::to_string(index) + " of '" + a.name + "' lacks " + f);
        rsa::RsaPrivateKey priv;
        try {
            priv = {rsa::BigUint::from_hex(fields["n"]), rsa::BigUint::from_hex(fields["e"]),
                    rsa::BigUint::from_hex(fields["d"]), rsa::BigUint::from_hex(fields["p"]),
                    rsa::BigUint::from_hex(fields["q"])};
        } catch (const Error&) {
            parse_fail(p.line, "invalid hex in generation " + std::to_string(index) + " of '" + a.name + "'");
        }
        rsa::validate(priv);
        auto pub = priv.public_key();
        a.generations.push_back({std::move(pub), std::move(priv), parse_int<std::int64_t>(fields["created"], p.line)});
    }
    if (a.generations.empty()) parse_fail(p.line, "account '" + a.name + "' has no keys");
    if (a.active_index >= a.generations.size()) parse_fail(p.line, "active index out of range for '" + a.name + "'");
    return a;
}

}  // namespace

Keyring parse(std::string_view text) {
    Keyring kr;
    std::optional<PendingAccount> pending;
    bool have_version = false;
    std::size_t line_no = 0;

    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_fail(line_no, "expected name=value");
        const std::string_view field = line.substr(0, eq);
        const std::string_view value = line.substr(eq + 1);

        if (!have_version) {
            if (field != "version") parse_fail(line_no, "file must start with version=");
            if (value != std::to_string(kFormatVersion))
                parse_fail(line_no, "unsupported keyring version " + std::string(value));
            have_version = true;
            continue;
        }
        if (field == "account") {
            if (pending) kr.accounts_.push_back(finish_account(std::move(*pending)));
            try {
                validate_account_name(value);
            } catch (const Error& e) {
                parse_fail(line_no, e.what());
            }
            pending = PendingAccount{std::string(value), std::nullopt, line_no, {}};
            continue;
        }
        if (!pending) parse_fail(line_no, "entry before any account= line");
        if (field == "active") {
            if (pending->active) parse_fail(line_no, "duplicate active= line");
            pending->active = parse_int<std::size_t>(value, line_no);
            continue;
        }
        if (field.substr(0, 4) == "key.") {
            const auto dot = field.find('.', 4);
            if (dot == std::string_view::npos) parse_fail(line_no, "malformed key field");
            const auto index = parse_int<std::size_t>(field.substr(4, dot - 4), line_no);
            const std::string name(field.substr(dot + 1));
            if (name != "n" && name != "e" && name != "d" && name != "p" && name != "q" && name != "created")
                parse_fail(line_no, "unknown key field '" + name + "'");
            auto& slot = pending->keys[index];
            if (!slot.emplace(name, std::string(value)).second) parse_fail(line_no, "duplicate key field");
            continue;
        }
        parse_fail(line_no, "unknown field '" + std::string(field) + "'");
    }
    if (!have_version) parse_fail(line_no, "missing version= line");
    if (pending) kr.accounts_.push_back(finish_account(std::move(*pending)));

    std::set<std::string> names;
    std::set<envelope::Fingerprint> fingerprints;
    for (const auto& a : kr.accounts_) {
        if (!names.insert(a.name).second) throw Error(Errc::validation, "duplicate account name '" + a.name + "'");
        for (const auto& g : a.generations)
            if (!fingerprints.insert(g.fingerprint()).second)
                throw Error(Errc::validation, "duplicate key fingerprint in account '" + a.name + "'");
    }
    return kr;
}

void save(const Keyring& kr, const fs::path& path) {
    const std::string text = serialize(kr);
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
        ::chmod(tmp.c_str(), S_IRUSR | S_IWUSR);
        out << text;
        out.flush();
        if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(Errc::io, "cannot replace " + path.string() + ": " + ec.message());
}

Keyring load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read keyring " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace cvlt::keyring
