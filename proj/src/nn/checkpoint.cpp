#include "malkit/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace malkit::nn {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'L', 'K', 'I', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return value;
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors,
                     const nlohmann::json& architecture) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        write_pod(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_pod(out, static_cast<std::uint64_t>(t.value.rows));
        write_pod(out, static_cast<std::uint64_t>(t.value.cols));
        out.write(reinterpret_cast<const char*>(t.value.data.data()),
                  static_cast<std::streamsize>(t.value.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
    out.close();

    std::ofstream sidecar(path + ".json", std::ios::trunc);
    if (!sidecar) {
        throw std::runtime_error("checkpoint: cannot open " + path + ".json");
    }
    sidecar << architecture.dump(2) << "\n";
}

std::vector<NamedTensor> load_checkpoint(const std::string& path,
                                         nlohmann::json* architecture) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::string_view(magic, 8) != std::string_view(kMagic, 8)) {
        throw std::runtime_error("checkpoint: bad magic in " + path);
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion) {
        throw std::runtime_error("checkpoint: unsupported version " +
                                 std::to_string(version));
    }
    const auto count = read_pod<std::uint32_t>(in);
    std::vector<NamedTensor> tensors;
    tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<std::uint32_t>(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto rows = read_pod<std::uint64_t>(in);
        const auto cols = read_pod<std::uint64_t>(in);
        Tensor2 value(static_cast<std::size_t>(rows),
                      static_cast<std::size_t>(cols));
        in.read(reinterpret_cast<char*>(value.data.data()),
                static_cast<std::streamsize>(value.size() * sizeof(double)));
        if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
        tensors.push_back({std::move(name), std::move(value)});
    }
    if (architecture != nullptr) {
        std::ifstream sidecar(path + ".json");
        if (sidecar) {
            sidecar >> *architecture;
        } else {
            *architecture = nlohmann::json();
        }
    }
    return tensors;
}

}  // namespace malkit::nn
