// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "neimkit/deim.hpp"
#include "neimkit/neim.hpp"

namespace neimkit {

/// Everything one training run produces, stored as a single versioned JSON
/// document. Loading rebuilds the theta interpolants from the serialized
/// tables, so save -> load -> evaluate is bit-identical.
struct ModelFile {
    std::string experiment;
    std::uint64_t seed = 0;
    PodBasis pod;
    std::optional<DeimModel> deim;
    std::optional<NeimModel> neim;
    std::optional<NeimModel> neim_exact;
};

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace neimkit
