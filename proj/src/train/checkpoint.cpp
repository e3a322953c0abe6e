// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/train/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

#include "filternet/common/digest.hpp"
#include "filternet/common/error.hpp"

namespace filternet {

namespace {

using json = nlohmann::json;

constexpr char kMagic[4] = {'F', 'L', 'T', 'N'};
constexpr std::size_t kPreamble = 4 + 4 + 8;
constexpr std::size_t kTrailer = 8;

void put_le(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t digest_of(const unsigned char* data, std::size_t size) {
  Fnv1a64 h;
  h.update(std::as_bytes(std::span(data, size)));
  return h.value();
}

struct NamedTensor {
  std::string name;
  const Tensor* tensor;
};

std::vector<NamedTensor> stored_tensors(const Checkpoint& ckpt,
                                        std::vector<Tensor>& scratch) {
  std::vector<NamedTensor> out;
  for (const Param* p : ckpt.model.parameters()) out.push_back({p->name, &p->value});
  if (!ckpt.scaler.empty()) {
    const std::size_t n = ckpt.scaler.mean().size();
    scratch = {Tensor({n}, ckpt.scaler.mean()), Tensor({n}, ckpt.scaler.stddev())};
    out.push_back({"scaler.mean", &scratch[0]});
    out.push_back({"scaler.std", &scratch[1]});
  }
  return out;
}

CheckpointError corrupt(const std::filesystem::path& path, const std::string& why) {
  return CheckpointError("checkpoint '" + path.string() + "': " + why);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::vector<Tensor> scratch;
  const std::vector<NamedTensor> tensors = stored_tensors(ckpt, scratch);

  json manifest = json::array();
  std::size_t offset = 0;
  for (const NamedTensor& t : tensors) {
    manifest.push_back(
        {{"name", t.name}, {"shape", t.tensor->shape()}, {"offset", offset}});
    offset += t.tensor->size() * sizeof(double);
  }
  json meta = {{"epoch", ckpt.meta.epoch}, {"seed", ckpt.meta.seed}};
  meta["val_loss"] = std::isfinite(ckpt.meta.val_loss) ? json(ckpt.meta.val_loss)
                                                       : json(nullptr);
  const json header = {{"model", to_json(ckpt.model.config())},
                       {"meta", meta},
                       {"tensors", manifest}};
  const std::string text = header.dump();

  std::vector<unsigned char> bytes(std::begin(kMagic), std::end(kMagic));
  put_le(bytes, kCheckpointVersion, 4);
  put_le(bytes, text.size(), 8);
  bytes.insert(bytes.end(), text.begin(), text.end());
  for (const NamedTensor& t : tensors) {
    for (double v : t.tensor->data()) put_le(bytes, std::bit_cast<std::uint64_t>(v), 8);
  }
  put_le(bytes, digest_of(bytes.data(), bytes.size()), 8);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kPreamble + kTrailer) throw corrupt(path, "truncated file");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw corrupt(path, "missing FLTN magic bytes");
  }
  const auto version = std::uint32_t(get_le(bytes.data() + 4, 4));
  if (version != kCheckpointVersion) {
    throw corrupt(path, "format version " + std::to_string(version) +
                            ", this build reads version " +
                            std::to_string(kCheckpointVersion));
  }
  const std::uint64_t header_len = get_le(bytes.data() + 8, 8);
  if (header_len > bytes.size() - kPreamble - kTrailer) {
    throw corrupt(path, "truncated file (header runs past the end)");
  }

  // A parseable header lets a short file be reported as truncated rather
  // than as a digest failure.
  const std::string text(bytes.begin() + kPreamble,
                         bytes.begin() + kPreamble + std::ptrdiff_t(header_len));
  json header = json::parse(text, nullptr, false);
  std::size_t data_len = 0;
  if (!header.is_discarded() && header.contains("tensors") &&
      header["tensors"].is_array()) {
    for (const json& t : header["tensors"]) {
      std::size_t n = 1;
      for (const json& d : t.value("shape", json::array())) n *= d.get<std::size_t>();
      data_len += n * sizeof(double);
    }
    const std::size_t expected = kPreamble + header_len + data_len + kTrailer;
    if (bytes.size() < expected) {
      throw corrupt(path, "truncated file (" + std::to_string(bytes.size()) +
                              " of " + std::to_string(expected) + " bytes)");
    }
  }
  const std::size_t body = bytes.size() - kTrailer;
  if (digest_of(bytes.data(), body) != get_le(bytes.data() + body, 8)) {
    throw corrupt(path, "digest mismatch");
  }
  if (header.is_discarded()) throw corrupt(path, "malformed JSON header");
  if (kPreamble + header_len + data_len != body) {
    throw corrupt(path, "tensor data does not match the manifest");
  }

  try {
    ModelConfig config;
    update_from_json(config, header.at("model"));
    TrainingMetadata meta;
    const json& m = header.at("meta");
    meta.epoch = m.at("epoch").get<std::size_t>();
    meta.seed = m.at("seed").get<std::uint64_t>();
    if (!m.at("val_loss").is_null()) meta.val_loss = m.at("val_loss").get<double>();

    Checkpoint ckpt{FilterNet(config, 0), data::Scaler(), meta};
    const unsigned char* data = bytes.data() + kPreamble + header_len;
    auto read_tensor = [&](const json& entry, const Shape& want,
                           const std::string& name) {
      if (entry.at("name").get<std::string>() != name) {
        throw corrupt(path, "expected tensor '" + name + "', found '" +
                                entry.at("name").get<std::string>() + "'");
      }
      const Shape shape = entry.at("shape").get<Shape>();
      if (!want.empty() && shape != want) {
        throw corrupt(path, "tensor '" + name + "' has shape " +
                                shape_string(shape) + ", model expects " +
                                shape_string(want));
      }
      const std::size_t offset = entry.at("offset").get<std::size_t>();
      if (offset + shape_size(shape) * 8 > data_len) {
        throw corrupt(path, "tensor '" + name + "' lies outside the data block");
      }
      Tensor t(shape);
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = std::bit_cast<double>(get_le(data + offset + 8 * i, 8));
      }
      return t;
    };

    const json& manifest = header.at("tensors");
    const std::vector<Param*> params = ckpt.model.parameters();
    if (manifest.size() != params.size() && manifest.size() != params.size() + 2) {
      throw corrupt(path, "manifest lists " + std::to_string(manifest.size()) +
                              " tensors, model has " +
                              std::to_string(params.size()) + " parameters");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k]->value = read_tensor(manifest[k], params[k]->value.shape(), params[k]->name);
      params[k]->zero_grad();
    }
    if (manifest.size() == params.size() + 2) {
      Tensor mean = read_tensor(manifest[params.size()], {}, "scaler.mean");
      Tensor sd = read_tensor(manifest[params.size() + 1], mean.shape(), "scaler.std");
      ckpt.scaler = data::Scaler(mean.storage(), sd.storage());
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw corrupt(path, std::string("bad header field: ") + e.what());
  } catch (const ConfigError& e) {
    throw corrupt(path, std::string("bad model config: ") + e.what());
  }
}

void require_compatible(const Checkpoint& ckpt, const ModelConfig& expected) {
  const ModelConfig& got = ckpt.model.config();
  if (got.filter != expected.filter) {
    throw CheckpointError("filter kind mismatch: checkpoint holds " +
                          std::string(filter_kind_name(got.filter)) +
                          ", config asks for " +
                          std::string(filter_kind_name(expected.filter)));
  }
  const json a = to_json(got);
  const json b = to_json(expected);
  for (const auto& item : a.items()) {
    if (item.value() != b.at(item.key())) {
      throw CheckpointError("model mismatch on '" + item.key() +
                            "': checkpoint has " + item.value().dump() +
                            ", config has " + b.at(item.key()).dump());
    }
  }
}

}  // namespace filternet
