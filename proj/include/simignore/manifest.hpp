#pragma once

// Run manifest: a JSON document describing one selection run — token counts,
// metric, budget (keep or ignore, exactly one), strategy, seed, and the
// tensor files to operate on. Relative paths resolve against the manifest's
// directory.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "simignore/select.hpp"
#include "simignore/tensor_io.hpp"
#include "simignore/token_space.hpp"

namespace simignore {

struct RunManifest {
    std::size_t n_sys = 0;
    std::size_t n_img = 0;
    std::size_t n_usr = 0;
    Metric metric = Metric::Cosine;
    std::size_t keep = 0;  // normalized internally; "ignore" converts to n_img - ignore
    SelectionStrategy strategy = SelectionStrategy::MaxOverText;
    std::uint32_t seed = 0;
    std::filesystem::path image_embeddings;
    std::filesystem::path text_embeddings;
    std::optional<std::filesystem::path> attention;
};

// Manifest plus its referenced tensors, loaded and shape-checked against the
// declared counts.
struct LoadedRun {
    RunManifest manifest;
    TokenSegmentation seg;
    EmbeddingMatrix image_emb;
    EmbeddingMatrix text_emb;
    std::optional<AttentionTensor> attention;
};

// Parses and validates the JSON schema; does not touch the referenced files.
RunManifest parse_manifest(const std::filesystem::path& path);

// parse_manifest plus tensor loading and dimension validation:
// image rows == n_img, text rows == n_usr, matching feature dims, and
// (when present) attention n_key == n_sys + n_img + n_usr.
LoadedRun load_run(const std::filesystem::path& path);

}  // namespace simignore
