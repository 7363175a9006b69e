#include "shl/core/archive.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>

#include "shl/core/error.hpp"

namespace shl {
namespace {

static_assert(std::endian::native == std::endian::little, "archive I/O assumes a little-endian host");

constexpr char kMagic[4] = {'S', 'H', 'L', 'A'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : os_(path, std::ios::binary), path_(path) {
        if (!os_) throw InputError("cannot write " + path.string());
    }
    void raw(const void* p, std::size_t n) { os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void finish() {
        os_.flush();
        if (!os_) throw InputError("failed writing " + path_.string());
    }

private:
    std::ofstream os_;
    std::filesystem::path path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : is_(path, std::ios::binary), path_(path) {
        if (!is_) throw ParseError("cannot open archive " + path.string());
    }
    void raw(void* p, std::size_t n) {
        is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!is_) throw ParseError("truncated archive " + path_.string());
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        if (n > (1u << 20)) throw ParseError("implausible string length in " + path_.string());
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }

private:
    std::ifstream is_;
    std::filesystem::path path_;
};

std::size_t product(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 0) throw InputError("negative array dimension");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

}  // namespace

std::string format_dims(const std::vector<int>& dims) {
    std::string out = "(";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(dims[i]);
    }
    return out + ")";
}

std::size_t NamedArrayArchive::Entry::count() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, data);
}

void NamedArrayArchive::put(std::string name, std::vector<int> dims, std::span<const float> values) {
    if (product(dims) != values.size()) throw InputError("array '" + name + "' shape/size mismatch");
    if (index_.contains(name)) throw InputError("duplicate array '" + name + "'");
    index_[name] = entries_.size();
    entries_.push_back({std::move(name), std::move(dims), std::vector<float>(values.begin(), values.end())});
}

void NamedArrayArchive::put(std::string name, std::vector<int> dims, std::span<const double> values) {
    if (product(dims) != values.size()) throw InputError("array '" + name + "' shape/size mismatch");
    if (index_.contains(name)) throw InputError("duplicate array '" + name + "'");
    index_[name] = entries_.size();
    entries_.push_back({std::move(name), std::move(dims), std::vector<double>(values.begin(), values.end())});
}

bool NamedArrayArchive::contains(const std::string& name) const noexcept { return index_.contains(name); }

const NamedArrayArchive::Entry& NamedArrayArchive::get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ParseError("archive has no array '" + name + "'");
    return entries_[it->second];
}

std::span<const float> NamedArrayArchive::floats(const std::string& name,
                                                 const std::vector<int>& dims) const {
    const Entry& e = get(name);
    if (e.dims != dims)
        throw ParseError("array '" + name + "' has shape " + format_dims(e.dims) + ", expected " +
                         format_dims(dims));
    const auto* v = std::get_if<std::vector<float>>(&e.data);
    if (!v) throw ParseError("array '" + name + "' is not float32");
    return *v;
}

std::span<const double> NamedArrayArchive::doubles(const std::string& name,
                                                   const std::vector<int>& dims) const {
    const Entry& e = get(name);
    if (e.dims != dims)
        throw ParseError("array '" + name + "' has shape " + format_dims(e.dims) + ", expected " +
                         format_dims(dims));
    const auto* v = std::get_if<std::vector<double>>(&e.data);
    if (!v) throw ParseError("array '" + name + "' is not float64");
    return *v;
}

const std::string& NamedArrayArchive::meta(const std::string& key) const {
    auto it = metadata.find(key);
    if (it == metadata.end()) throw ParseError("archive metadata lacks '" + key + "'");
    return it->second;
}

void NamedArrayArchive::save(const std::filesystem::path& path) const {
    Writer w(path);
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(metadata.size()));
    for (const auto& [k, v] : metadata) {
        w.str(k);
        w.str(v);
    }
    w.u32(static_cast<std::uint32_t>(entries_.size()));
    for (const Entry& e : entries_) {
        w.str(e.name);
        const std::uint8_t dtype = std::holds_alternative<std::vector<float>>(e.data) ? 0 : 1;
        w.raw(&dtype, 1);
        w.u32(static_cast<std::uint32_t>(e.dims.size()));
        for (int d : e.dims) {
            const std::int32_t v = d;
            w.raw(&v, sizeof v);
        }
        std::visit([&](const auto& vec) { w.raw(vec.data(), vec.size() * sizeof(vec[0])); }, e.data);
    }
    w.finish();
}

NamedArrayArchive NamedArrayArchive::load(const std::filesystem::path& path) {
    Reader r(path);
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError(path.string() + " is not a weight archive");
    if (r.u32() != kVersion) throw ParseError("unsupported archive version in " + path.string());
    NamedArrayArchive ar;
    const std::uint32_t nmeta = r.u32();
    for (std::uint32_t i = 0; i < nmeta; ++i) {
        std::string k = r.str();
        ar.metadata[k] = r.str();
    }
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string name = r.str();
        std::uint8_t dtype = 0;
        r.raw(&dtype, 1);
        const std::uint32_t rank = r.u32();
        if (rank > 8) throw ParseError("implausible rank in " + path.string());
        std::vector<int> dims(rank);
        for (auto& d : dims) {
            std::int32_t v;
            r.raw(&v, sizeof v);
            d = v;
        }
        const std::size_t count = product(dims);
        if (dtype == 0) {
            std::vector<float> values(count);
            r.raw(values.data(), count * sizeof(float));
            ar.put(std::move(name), std::move(dims), std::span<const float>(values));
        } else if (dtype == 1) {
            std::vector<double> values(count);
            r.raw(values.data(), count * sizeof(double));
            ar.put(std::move(name), std::move(dims), std::span<const double>(values));
        } else {
            throw ParseError("unknown dtype in " + path.string());
        }
    }
    return ar;
}

}  // namespace shl
