#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include <oscsync/common.hpp>

namespace oscsync::cli {

namespace fs = std::filesystem;

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error(ErrorCode::Io, "cannot allocate a digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorCode::Io, "SHA-1 digest failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

void write_file(const fs::path& dir, const std::string& name, std::string_view content) {
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + (dir / name).string());
}

Manifest::Manifest(fs::path dir, std::string verb, nlohmann::json config)
    : dir_(std::move(dir)), verb_(std::move(verb)), config_(std::move(config)) {}

nlohmann::json Manifest::base() const {
  nlohmann::json doc;
  doc["verb"] = verb_;
  doc["seed"] = config_.contains("seed") ? config_.at("seed") : nlohmann::json();
  doc["config"] = config_;
  doc["config_hash"] = git_blob_hash(config_.dump());
  return doc;
}

void Manifest::write(const nlohmann::json& doc) const { write_file(dir_, "manifest.json", doc.dump(2) + "\n"); }

void Manifest::begin() const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir_.string());
  auto doc = base();
  doc["status"] = "incomplete";
  write(doc);
}

void Manifest::finish(const std::vector<OutputFile>& outputs) const {
  auto doc = base();
  doc["status"] = "complete";
  nlohmann::json files = nlohmann::json::object();
  std::string listing;
  for (const auto& o : outputs) {
    const std::string h = git_blob_hash(o.content);
    files[o.name] = h;
    listing += h + "  " + o.name + "\n";
  }
  doc["outputs"] = files;
  doc["content_hash"] = git_blob_hash(listing);
  write(doc);
}

}  // namespace oscsync::cli
