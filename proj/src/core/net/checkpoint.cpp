// Copyright 2026 The kbio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/net/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "core/common.hpp"

namespace kbio {

namespace {

constexpr char kMagic[8] = {'K', 'B', 'I', 'O', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void raw(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void i64(std::int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  void array(const std::string& name, const std::vector<double>& data,
             std::vector<std::uint32_t> dims) {
    str(name);
    u32(static_cast<std::uint32_t>(dims.size()));
    std::size_t expect = 1;
    for (const auto d : dims) {
      u32(d);
      expect *= d;
    }
    if (expect != data.size()) throw ConfigError("checkpoint: shape mismatch for " + name);
    raw(data.data(), data.size() * sizeof(double));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  void raw(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (!in_) throw DataError("checkpoint '" + path_ + "': truncated file");
  }
  std::uint32_t u32() { std::uint32_t v; raw(&v, sizeof v); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
  std::int64_t i64() { std::int64_t v; raw(&v, sizeof v); return v; }
  double f64() { double v; raw(&v, sizeof v); return v; }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > 4096) throw DataError("checkpoint '" + path_ + "': implausible string length");
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  std::vector<double> array(const std::string& expect_name,
                            const std::vector<std::uint32_t>& expect_dims) {
    const std::string name = str();
    if (name != expect_name) {
      throw DataError("checkpoint '" + path_ + "': expected field '" + expect_name +
                      "', found '" + name + "'");
    }
    const std::uint32_t ndims = u32();
    if (ndims != expect_dims.size()) {
      throw DataError("checkpoint '" + path_ + "': rank mismatch for " + expect_name);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < expect_dims.size(); ++i) {
      const std::uint32_t d = u32();
      if (d != expect_dims[i]) {
        throw DataError("checkpoint '" + path_ + "': dimension mismatch for " + expect_name +
                        " (got " + std::to_string(d) + ", expected " +
                        std::to_string(expect_dims[i]) + ")");
      }
      total *= d;
    }
    std::vector<double> data(total);
    raw(data.data(), total * sizeof(double));
    return data;
  }

 private:
  std::istream& in_;
  std::string path_;
};

void write_layer(Writer& w, const std::string& prefix, const LstmLayerParams& layer) {
  const auto u = static_cast<std::uint32_t>(layer.units);
  const auto d = static_cast<std::uint32_t>(layer.in_dim);
  w.array(prefix + ".w", layer.w, {4 * u, d});
  w.array(prefix + ".u", layer.u, {4 * u, u});
  w.array(prefix + ".b", layer.b, {4 * u});
}

LstmLayerParams read_layer(Reader& r, const std::string& prefix, int units, int in_dim) {
  LstmLayerParams layer;
  layer.units = units;
  layer.in_dim = in_dim;
  const auto u = static_cast<std::uint32_t>(units);
  const auto d = static_cast<std::uint32_t>(in_dim);
  layer.w = r.array(prefix + ".w", {4 * u, d});
  layer.u = r.array(prefix + ".u", {4 * u, u});
  layer.b = r.array(prefix + ".b", {4 * u});
  return layer;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  Writer w(out);
  const ModelParams& p = checkpoint.params;

  w.raw(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(p.config.input_dim));
  w.u32(static_cast<std::uint32_t>(p.config.units));
  w.u32(static_cast<std::uint32_t>(p.config.num_layers));
  w.u32(static_cast<std::uint32_t>(p.config.max_seq_len));
  w.f64(p.config.dropout_rate);
  w.f64(p.config.recurrent_dropout_rate);
  w.f64(p.config.bn_momentum);
  w.f64(p.config.bn_epsilon);
  w.u64(checkpoint.training_seed);

  const auto u = static_cast<std::uint32_t>(p.config.units);
  write_layer(w, "layer1", p.layer1);
  w.array("bn.gamma", p.bn.gamma, {u});
  w.array("bn.beta", p.bn.beta, {u});
  w.array("bn.running_mean", p.bn.running_mean, {u});
  w.array("bn.running_var", p.bn.running_var, {u});
  w.i64(p.bn.update_count);
  write_layer(w, "layer2", p.layer2);

  w.u32(p.classifier ? 1 : 0);
  if (p.classifier) {
    const auto c = static_cast<std::uint32_t>(p.classifier->num_classes);
    w.u32(c);
    w.array("classifier.w", p.classifier->w, {c, u});
    w.array("classifier.b", p.classifier->b, {c});
  }

  w.u32(checkpoint.adam ? 1 : 0);
  if (checkpoint.adam) {
    w.i64(checkpoint.adam->t);
    const auto n = static_cast<std::uint32_t>(checkpoint.adam->m.size());
    w.array("adam.m", checkpoint.adam->m, {n});
    w.array("adam.v", checkpoint.adam->v, {n});
  }
  if (!out) throw DataError("write to checkpoint '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  Reader r(in, path);

  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DataError("checkpoint '" + path + "': bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw DataError("checkpoint '" + path + "': unsupported format version " +
                    std::to_string(version));
  }

  Checkpoint checkpoint;
  ModelParams& p = checkpoint.params;
  p.config.input_dim = static_cast<int>(r.u32());
  p.config.units = static_cast<int>(r.u32());
  p.config.num_layers = static_cast<int>(r.u32());
  p.config.max_seq_len = static_cast<int>(r.u32());
  p.config.dropout_rate = r.f64();
  p.config.recurrent_dropout_rate = r.f64();
  p.config.bn_momentum = r.f64();
  p.config.bn_epsilon = r.f64();
  validate(p.config);
  checkpoint.training_seed = r.u64();

  const auto u = static_cast<std::uint32_t>(p.config.units);
  p.layer1 = read_layer(r, "layer1", p.config.units, p.config.input_dim);
  p.bn.gamma = r.array("bn.gamma", {u});
  p.bn.beta = r.array("bn.beta", {u});
  p.bn.running_mean = r.array("bn.running_mean", {u});
  p.bn.running_var = r.array("bn.running_var", {u});
  p.bn.update_count = r.i64();
  p.layer2 = read_layer(r, "layer2", p.config.units, p.config.units);

  if (r.u32() != 0) {
    ClassifierParams cls;
    cls.num_classes = static_cast<int>(r.u32());
    if (cls.num_classes < 2) throw DataError("checkpoint '" + path + "': bad classifier");
    const auto c = static_cast<std::uint32_t>(cls.num_classes);
    cls.w = r.array("classifier.w", {c, u});
    cls.b = r.array("classifier.b", {c});
    p.classifier = std::move(cls);
  }

  if (r.u32() != 0) {
    AdamState adam;
    adam.t = r.i64();
    const auto expect = static_cast<std::uint32_t>(total_trainable(p));
    adam.m = r.array("adam.m", {expect});
    adam.v = r.array("adam.v", {expect});
    checkpoint.adam = std::move(adam);
  }
  return checkpoint;
}

}  // namespace kbio
