#ifndef MALKIT_NN_CHECKPOINT_HPP
#define MALKIT_NN_CHECKPOINT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "malkit/tensor.hpp"

namespace malkit::nn {

struct NamedTensor {
    std::string name;
    Tensor2 value;  // vectors stored as 1 x N
};

// Flat binary checkpoint: magic "MALKITCK", u32 version, u32 block count,
// then per block: u32 name length, name bytes, u64 rows, u64 cols, and the
// row-major little-endian f64 payload. A JSON sidecar at <path>.json carries
// the architecture description.
void save_checkpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors,
                     const nlohmann::json& architecture);

std::vector<NamedTensor> load_checkpoint(const std::string& path,
                                         nlohmann::json* architecture = nullptr);

}  // namespace malkit::nn

#endif  // MALKIT_NN_CHECKPOINT_HPP
