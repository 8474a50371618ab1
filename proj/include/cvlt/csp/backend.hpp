#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cvlt/bytes.hpp"

namespace cvlt::csp {

// Named-object store. Implementations are safe to call from several threads;
// put and remove are atomic per object and list returns a consistent snapshot.
class Backend {
public:
    virtual ~Backend() = default;

    // Replaces any existing object of the same name.
    virtual void put(const std::string& name, ByteView data) = 0;
    virtual std::optional<Bytes> get(const std::string& name) = 0;
    // Sorted bytewise.
    virtual std::vector<std::string> list() = 0;
    // Returns false if no such object existed.
    virtual bool remove(const std::string& name) = 0;
};

class MemoryBackend final : public Backend {
public:
    void put(const std::string& name, ByteView data) override;
    std::optional<Bytes> get(const std::string& name) override;
    std::vector<std::string> list() override;
    bool remove(const std::string& name) override;

private:
    std::shared_mutex mu_;
    std::map<std::string, Bytes> objects_;
};

// One file per object under `root`, named by the lowercase hex of the object
// name. Hex names longer than kSegmentChars are split into directories
// "<chunk>.d/" of kSegmentChars each, with the final chunk as the file name,
// so every path component stays within NAME_MAX. Writes go through a
// dot-prefixed temporary file and a rename.
class DirectoryBackend final : public Backend {
public:
    static constexpr std::size_t kSegmentChars = 200;

    explicit DirectoryBackend(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path path_for(const std::string& name) const;

    void put(const std::string& name, ByteView data) override;
    std::optional<Bytes> get(const std::string& name) override;
    std::vector<std::string> list() override;
    bool remove(const std::string& name) override;

private:
    std::filesystem::path root_;
    std::shared_mutex mu_;
    std::uint64_t tmp_counter_ = 0;
};

}  // namespace cvlt::csp
