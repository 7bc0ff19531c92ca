#pragma once

#include "lugsi/solver.hpp"

#include <filesystem>
#include <string>

namespace lugsi {

inline constexpr int model_format_version = 1;

/**
 * Versioned JSON model document with fields format_version, model_kind
 * ("linear" | "kernel"), method, kernel, gamma, m, seed, scaling and the
 * parameter triples (w, b, w_b, w_c) or (A, c, A_b, A_c) plus the stored
 * training points for kernel models. Doubles are written in shortest
 * round-trip form, so save/load reproduces every parameter bit for bit.
 */
[[nodiscard]] std::string serialize_model(const model &model);
[[nodiscard]] model deserialize_model(const std::string &text);

void save_model(const std::filesystem::path &path, const model &model);
[[nodiscard]] model load_model(const std::filesystem::path &path);

}  // namespace lugsi
