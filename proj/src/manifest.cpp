#include "simignore/manifest.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

namespace simignore {

namespace {

using nlohmann::json;

std::size_t require_count(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw Error(Errc::ManifestInvalid, std::string("manifest missing key \"") + key + "\"");
    }
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw Error(Errc::ManifestInvalid,
                    std::string("manifest key \"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::filesystem::path require_path(const json& doc, const char* key,
                                   const std::filesystem::path& base) {
    if (!doc.contains(key) || !doc.at(key).is_string()) {
        throw Error(Errc::ManifestInvalid,
                    std::string("manifest missing file path \"") + key + "\"");
    }
    std::filesystem::path p = doc.at(key).get<std::string>();
    if (p.is_relative()) {
        p = base / p;
    }
    return p;
}

Metric parse_metric(const std::string& name) {
    if (name == "cosine") {
        return Metric::Cosine;
    }
    if (name == "euclidean") {
        return Metric::Euclidean;
    }
    if (name == "manhattan") {
        return Metric::Manhattan;
    }
    throw Error(Errc::ManifestInvalid, "unknown metric \"" + name + "\"");
}

SelectionStrategy parse_strategy(const std::string& name) {
    if (name == "flat-topk") {
        return SelectionStrategy::FlatTopK;
    }
    if (name == "max-over-text") {
        return SelectionStrategy::MaxOverText;
    }
    throw Error(Errc::ManifestInvalid, "unknown strategy \"" + name + "\"");
}

}  // namespace

RunManifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::FileNotFound, "cannot open manifest " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ManifestInvalid, std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(Errc::ManifestInvalid, "manifest root must be a JSON object");
    }

    const std::filesystem::path base = path.parent_path();
    RunManifest m;
    m.n_sys = require_count(doc, "n_sys");
    m.n_img = require_count(doc, "n_img");
    m.n_usr = require_count(doc, "n_usr");

    const bool has_keep = doc.contains("keep");
    const bool has_ignore = doc.contains("ignore");
    if (has_keep == has_ignore) {
        throw Error(Errc::ManifestInvalid,
                    "manifest must contain exactly one of \"keep\" or \"ignore\"");
    }
    const std::size_t budget = require_count(doc, has_keep ? "keep" : "ignore");
    if (budget > m.n_img) {
        throw Error(Errc::ManifestInvalid,
                    std::string(has_keep ? "keep" : "ignore") + " = " + std::to_string(budget) +
                        " exceeds n_img = " + std::to_string(m.n_img));
    }
    m.keep = has_keep ? budget : m.n_img - budget;

    if (doc.contains("metric")) {
        if (!doc.at("metric").is_string()) {
            throw Error(Errc::ManifestInvalid, "manifest \"metric\" must be a string");
        }
        m.metric = parse_metric(doc.at("metric").get<std::string>());
    }
    if (doc.contains("strategy")) {
        if (!doc.at("strategy").is_string()) {
            throw Error(Errc::ManifestInvalid, "manifest \"strategy\" must be a string");
        }
        m.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() || doc.at("seed").get<std::int64_t>() < 0) {
            throw Error(Errc::ManifestInvalid, "manifest \"seed\" must be a non-negative integer");
        }
        m.seed = static_cast<std::uint32_t>(doc.at("seed").get<std::uint64_t>());
    }

    m.image_embeddings = require_path(doc, "image_embeddings", base);
    m.text_embeddings = require_path(doc, "text_embeddings", base);
    if (doc.contains("attention")) {
        m.attention = require_path(doc, "attention", base);
    }
    return m;
}

LoadedRun load_run(const std::filesystem::path& path) {
    RunManifest m = parse_manifest(path);
    TokenSegmentation seg(m.n_sys, m.n_img, m.n_usr);

    EmbeddingMatrix img = io::to_embedding(io::read_tensor(m.image_embeddings));
    if (img.rows() != m.n_img) {
        throw Error(Errc::ManifestInvalid,
                    "image embeddings carry " + std::to_string(img.rows()) +
                        " rows but manifest declares n_img = " + std::to_string(m.n_img));
    }
    EmbeddingMatrix txt = io::to_embedding(io::read_tensor(m.text_embeddings));
    if (txt.rows() != m.n_usr) {
        throw Error(Errc::ManifestInvalid,
                    "text embeddings carry " + std::to_string(txt.rows()) +
                        " rows but manifest declares n_usr = " + std::to_string(m.n_usr));
    }
    if (img.dim() != txt.dim()) {
        throw Error(Errc::ManifestInvalid,
                    "image dim " + std::to_string(img.dim()) + " != text dim " +
                        std::to_string(txt.dim()));
    }

    std::optional<AttentionTensor> attention;
    if (m.attention) {
        AttentionTensor a = io::to_attention(io::read_tensor(*m.attention));
        if (a.n_key() != seg.total()) {
            throw Error(Errc::ManifestInvalid,
                        "attention key count " + std::to_string(a.n_key()) +
                            " != n_sys + n_img + n_usr = " + std::to_string(seg.total()));
        }
        attention = std::move(a);
    }
    return LoadedRun{std::move(m), seg, std::move(img), std::move(txt), std::move(attention)};
}

}  // namespace simignore
