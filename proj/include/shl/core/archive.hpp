#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace shl {

// Self-describing binary archive of named, shaped arrays plus string
// metadata. Used for autoencoder and forecaster checkpoints.
//
// Layout (little endian):
//   "SHLA" u32 version
//   u32 metadata_count { u32 len, key, u32 len, value }*
//   u32 entry_count { u32 len, name, u8 dtype(0=f32,1=f64), u32 rank, i32 dims[rank], data }*
class NamedArrayArchive {
public:
    struct Entry {
        std::string name;
        std::vector<int> dims;
        std::variant<std::vector<float>, std::vector<double>> data;

        std::size_t count() const noexcept;
    };

    std::map<std::string, std::string> metadata;

    void put(std::string name, std::vector<int> dims, std::span<const float> values);
    void put(std::string name, std::vector<int> dims, std::span<const double> values);

    bool contains(const std::string& name) const noexcept;
    const Entry& get(const std::string& name) const;
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    // Typed accessors; throw ParseError on dtype or shape mismatch.
    std::span<const float> floats(const std::string& name, const std::vector<int>& dims) const;
    std::span<const double> doubles(const std::string& name, const std::vector<int>& dims) const;

    const std::string& meta(const std::string& key) const;

    void save(const std::filesystem::path& path) const;
    static NamedArrayArchive load(const std::filesystem::path& path);

private:
    std::vector<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

std::string format_dims(const std::vector<int>& dims);

}  // namespace shl
