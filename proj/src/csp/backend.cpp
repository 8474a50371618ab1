#include "cvlt/csp/backend.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <mutex>

#include "cvlt/csp/wire.hpp"
#include "cvlt/error.hpp"

namespace fs = std::filesystem;

namespace cvlt::csp {

void MemoryBackend::put(const std::string& name, ByteView data) {
    Bytes copy(data.begin(), data.end());
    std::unique_lock lock(mu_);
    objects_[name] = std::move(copy);
}

std::optional<Bytes> MemoryBackend::get(const std::string& name) {
    std::shared_lock lock(mu_);
    const auto it = objects_.find(name);
    if (it == objects_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> MemoryBackend::list() {
    std::shared_lock lock(mu_);
    std::vector<std::string> names;
    names.reserve(objects_.size());
    for (const auto& [name, _] : objects_) names.push_back(name);
    return names;
}

bool MemoryBackend::remove(const std::string& name) {
    std::unique_lock lock(mu_);
    return objects_.erase(name) > 0;
}

namespace {

constexpr std::string_view kDirSuffix = ".d";

void write_file(const fs::path& path, ByteView data) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
    if (fd < 0) throw Error(Errc::io, "open " + path.string() + ": " + std::strerror(errno));
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            throw Error(Errc::io, "write " + path.string() + ": " + std::strerror(err));
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0)
        throw Error(Errc::io, "flush " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

DirectoryBackend::DirectoryBackend(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_))
        throw Error(Errc::io, "cannot use storage root " + root_.string());
}

fs::path DirectoryBackend::path_for(const std::string& name) const {
    const std::string hex = to_hex(as_bytes(name));
    fs::path p = root_;
    std::size_t off = 0;
    while (hex.size() - off > kSegmentChars) {
        p /= hex.substr(off, kSegmentChars) + std::string(kDirSuffix);
        off += kSegmentChars;
    }
    return p / hex.substr(off);
}

void DirectoryBackend::put(const std::string& name, ByteView data) {
    const fs::path target = path_for(name);
    std::unique_lock lock(mu_);
    fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(tmp_counter_++));
    try {
        write_file(tmp, data);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
    fs::rename(tmp, target);
}

std::optional<Bytes> DirectoryBackend::get(const std::string& name) {
    const fs::path target = path_for(name);
    std::shared_lock lock(mu_);
    std::ifstream in(target, std::ios::binary);
    if (!in) return std::nullopt;
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::io, "read " + target.string());
    return data;
}

std::vector<std::string> DirectoryBackend::list() {
    std::shared_lock lock(mu_);
    std::vector<std::string> names;
    for (auto it = fs::recursive_directory_iterator(root_); it != fs::recursive_directory_iterator(); ++it) {
        const std::string leaf = it->path().filename().string();
        if (!leaf.empty() && leaf.front() == '.') {
            if (it->is_directory()) it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        std::string hex;
        bool ours = true;
        for (const auto& part : fs::relative(it->path().parent_path(), root_)) {
            const std::string seg = part.string();
            if (seg == ".") continue;
            ours = ours && seg.size() == kSegmentChars + kDirSuffix.size() && seg.ends_with(kDirSuffix);
            hex += seg.substr(0, kSegmentChars);
        }
        hex += leaf;
        if (!ours) continue;
        try {
            std::string name = to_string(from_hex(hex));
            if (path_for(name) != it->path()) continue;
            validate_object_name(name);
            names.push_back(std::move(name));
        } catch (const Error&) {
            // Not one of ours.
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

bool DirectoryBackend::remove(const std::string& name) {
    const fs::path target = path_for(name);
    std::unique_lock lock(mu_);
    std::error_code ec;
    const bool removed = fs::remove(target, ec);
    if (ec) throw Error(Errc::io, "remove " + target.string() + ": " + ec.message());
    for (fs::path dir = target.parent_path(); dir != root_ && fs::is_empty(dir, ec); dir = dir.parent_path())
        fs::remove(dir, ec);
    return removed;
}

}  // namespace cvlt::csp
