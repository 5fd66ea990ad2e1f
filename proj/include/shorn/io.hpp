#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shorn/carpenter.hpp"
#include "shorn/linalg.hpp"
#include "shorn/majorization.hpp"
#include "shorn/sequence.hpp"

namespace shorn::io {

using nlohmann::json;

// Malformed documents throw InputError.

/// {"n": int, "data": [[re, im], ...]} with n*n entries, row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// {"values": [...]}
json vector_to_json(std::span<const double> v);
RealVector vector_from_json(const json& j);

/// [{"j": int, "k": int, "t": real}, ...] with 1-based indices.
json transforms_to_json(std::span<const TTransform> ts);
std::vector<TTransform> transforms_from_json(const json& j);

/// {"prefix": [...], "tail": {"kind": ..., ...}}
json spec_to_json(const SequenceSpec& s);
SequenceSpec spec_from_json(const json& j);

/// Matrix fields plus "depth", "covered", "residual_bound", "permutation", "pad".
json truncated_to_json(const TruncatedProjection& t);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

} // namespace shorn::io
