#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gsh/kernel.hpp"
#include "gsh/types.hpp"
#include "gsh/weights.hpp"

namespace gsh::io {

using json = nlohmann::json;

/// Sequence specification: {"family": ..., "params": {...}, "p_max": N}.
weights::WeightSequence sequence_from_json(const json& j);
json sequence_to_json(const weights::WeightSequence& seq);

/// Coefficient field: {"dim": d, "box": [...], "kind": "test"|"dual",
/// "data": [[re, im], ...]} in lexicographic order.
CoefficientField field_from_json(const json& j);
json field_to_json(const CoefficientField& a);

/// Sampled function: {"dim": d, "grid": [[...], ...], "values": [[re, im], ...]}.
SampledFunction samples_from_json(const json& j);
json samples_to_json(const SampledFunction& s);

/// Kernel: {"l": l, "s": s, "out_box": [...], "in_box": [...],
/// "data": [[re, im], ...]} row-major.
kernel::KernelCoefficients kernel_from_json(const json& j);
json kernel_to_json(const kernel::KernelCoefficients& t);

json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const json& j);

/// FNV-1a digest of the file bytes, as a hex string; input manifests.
std::string file_digest(const std::filesystem::path& path);

}  // namespace gsh::io
