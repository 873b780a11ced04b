// ctckit/checkpoint.cc

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ctckit/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "ctckit/error.h"

namespace ctckit {

namespace {

constexpr char kMagic[8] = {'C', 'T', 'C', 'K', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    require(bool(out_), "save_checkpoint: cannot open ", path, " for writing");
  }
  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void i64(std::int64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void doubles(const std::vector<double>& v) {
    bytes(v.data(), v.size() * sizeof(double));
  }
  void finish() { require(bool(out_), "save_checkpoint: write failed for ", path_); }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    require(bool(in_), "load_checkpoint: cannot open ", path);
  }
  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    require(bool(in_), "load_checkpoint: ", path_, " is corrupt or truncated at offset ", offset_);
    offset_ += n;
  }
  std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
  std::int64_t i64() { std::int64_t v; bytes(&v, 8); return v; }
  double f64() { double v; bytes(&v, 8); return v; }
  std::string str() {
    const std::uint32_t n = u32();
    require(n <= (1u << 20), "load_checkpoint: ", path_, " has an implausible string length at offset ",
            offset_);
    std::string s(n, '\0');
    if (n > 0) bytes(s.data(), n);
    return s;
  }
  void doubles(std::vector<double>* v) { if (!v->empty()) bytes(v->data(), v->size() * sizeof(double)); }
  void expect_eof() {
    in_.peek();
    require(in_.eof(), "load_checkpoint: trailing bytes after offset ", offset_, " in ", path_);
  }
  std::size_t offset() const { return offset_; }
  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::size_t offset_ = 0;
};

void write_spec(Writer* w, const LayerSpec& spec) {
  w->u8(static_cast<std::uint8_t>(spec.kind));
  w->u32(static_cast<std::uint32_t>(spec.input_dim));
  w->u32(static_cast<std::uint32_t>(spec.output_dim));
  w->u8(static_cast<std::uint8_t>(spec.activation));
}

LayerSpec read_spec(Reader* r) {
  LayerSpec spec;
  const std::uint8_t kind = r->u8();
  require(kind <= 2, "load_checkpoint: bad layer kind ", int(kind), " at offset ", r->offset());
  spec.kind = static_cast<LayerKind>(kind);
  spec.input_dim = static_cast<int>(r->u32());
  spec.output_dim = static_cast<int>(r->u32());
  const std::uint8_t act = r->u8();
  require(act <= 1, "load_checkpoint: bad activation ", int(act), " at offset ", r->offset());
  spec.activation = static_cast<Activation>(act);
  return spec;
}

void write_alphabet(Writer* w, const Alphabet& alphabet) {
  w->u32(static_cast<std::uint32_t>(alphabet.size()));
  for (const auto& sym : alphabet.symbols()) w->str(sym);
  w->str(alphabet.noise_marker());
}

Alphabet read_alphabet(Reader* r) {
  const std::uint32_t n = r->u32();
  require(n >= 3 && n <= 100000, "load_checkpoint: implausible alphabet size ", n, " at offset ",
          r->offset());
  std::vector<std::string> chars;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string sym = r->str();
    if (i < 3) {
      static const char* kReserved[3] = {"<blank>", "<space>", "<noise>"};
      require(sym == kReserved[i], "load_checkpoint: alphabet entry ", i, " is '", sym,
              "', expected '", kReserved[i], "'");
    } else {
      chars.push_back(sym);
    }
  }
  Alphabet alphabet = Alphabet::with_characters(chars);
  alphabet.set_noise_marker(r->str());
  return alphabet;
}

void write_stack_specs(Writer* w, const LayerStack& stack) {
  w->u32(static_cast<std::uint32_t>(stack.size()));
  for (const auto& layer : stack) write_spec(w, layer->spec());
}

LayerStack read_stack(Reader* r) {
  const std::uint32_t n = r->u32();
  require(n <= 1000, "load_checkpoint: implausible layer count ", n, " at offset ", r->offset());
  LayerStack stack;
  for (std::uint32_t i = 0; i < n; ++i) stack.push_back(make_layer(read_spec(r)));
  return stack;
}

}  // namespace

void save_checkpoint(ModelGraph& model, const AdamState* adam, const TrainingMeta& meta,
                     const std::string& path) {
  Writer w(path);
  w.bytes(kMagic, 8);
  w.u32(kVersion);

  w.u8(model.topology == Topology::kSingleTask ? 0 : 1);
  w.u32(static_cast<std::uint32_t>(model.input_dim));
  write_stack_specs(&w, model.shared);
  w.u32(static_cast<std::uint32_t>(model.branches.size()));
  for (const auto& b : model.branches) {
    w.str(b.task);
    write_alphabet(&w, b.alphabet);
    write_stack_specs(&w, b.layers);
  }

  w.u8(model.normalizer.empty() ? 0 : 1);
  if (!model.normalizer.empty()) {
    w.u32(static_cast<std::uint32_t>(model.normalizer.mean.size()));
    w.doubles(model.normalizer.mean);
    w.doubles(model.normalizer.inv_std);
  }

  ParamSet params = model.params();
  w.u64(params.num_blocks());
  for (const auto& ref : params.refs()) {
    w.u32(static_cast<std::uint32_t>(ref.mat->rows));
    w.u32(static_cast<std::uint32_t>(ref.mat->cols));
    w.doubles(ref.mat->data);
  }

  w.u8(adam ? 1 : 0);
  if (adam) {
    require(adam->m.size() == params.num_blocks(),
            "save_checkpoint: optimizer state does not match the model");
    w.f64(adam->lr);
    w.f64(adam->beta1);
    w.f64(adam->beta2);
    w.f64(adam->epsilon);
    w.i64(adam->step_count);
    for (const auto& m : adam->m) w.doubles(m.data);
    for (const auto& v : adam->v) w.doubles(v.data);
  }

  w.u32(static_cast<std::uint32_t>(meta.epoch));
  w.f64(meta.best_val_loss);
  w.u64(meta.seed);
  w.i64(meta.infeasible_skipped);
  w.finish();
}

Checkpoint load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, 8);
  require(std::memcmp(magic, kMagic, 8) == 0, "load_checkpoint: ", path,
          " is not a checkpoint file (bad magic)");
  const std::uint32_t version = r.u32();
  require(version == kVersion, "load_checkpoint: ", path, " has format version ", version,
          " but this build reads version ", kVersion);

  Checkpoint ckpt;
  ModelGraph& model = ckpt.model;
  const std::uint8_t topology = r.u8();
  require(topology <= 1, "load_checkpoint: bad topology tag at offset ", r.offset());
  model.topology = topology == 0 ? Topology::kSingleTask : Topology::kMultiTask;
  model.input_dim = static_cast<int>(r.u32());
  model.shared = read_stack(&r);
  const std::uint32_t n_branches = r.u32();
  require(n_branches >= 1 && n_branches <= 16, "load_checkpoint: implausible branch count ",
          n_branches);
  for (std::uint32_t i = 0; i < n_branches; ++i) {
    TaskBranch branch;
    branch.task = r.str();
    branch.alphabet = read_alphabet(&r);
    branch.layers = read_stack(&r);
    model.branches.push_back(std::move(branch));
  }

  if (r.u8() != 0) {
    const std::uint32_t dim = r.u32();
    require(dim <= 1000000, "load_checkpoint: implausible normalizer dim ", dim);
    model.normalizer.mean.resize(dim);
    model.normalizer.inv_std.resize(dim);
    r.doubles(&model.normalizer.mean);
    r.doubles(&model.normalizer.inv_std);
  }

  ParamSet params = model.params();
  const std::uint64_t n_blocks = r.u64();
  require(n_blocks == params.num_blocks(), "load_checkpoint: ", path, " has ", n_blocks,
          " parameter blocks but the topology demands ", params.num_blocks());
  for (const auto& ref : params.refs()) {
    const int rows = static_cast<int>(r.u32());
    const int cols = static_cast<int>(r.u32());
    require(rows == ref.mat->rows && cols == ref.mat->cols, "load_checkpoint: block ", ref.name,
            " has shape ", rows, "x", cols, " but the topology demands ", ref.mat->rows, "x",
            ref.mat->cols);
    r.doubles(&ref.mat->data);
  }

  ckpt.has_adam = r.u8() != 0;
  if (ckpt.has_adam) {
    ckpt.adam.lr = r.f64();
    ckpt.adam.beta1 = r.f64();
    ckpt.adam.beta2 = r.f64();
    ckpt.adam.epsilon = r.f64();
    ckpt.adam.step_count = r.i64();
    ckpt.adam.m = zeros_like(params);
    ckpt.adam.v = zeros_like(params);
    for (auto& m : ckpt.adam.m) r.doubles(&m.data);
    for (auto& v : ckpt.adam.v) r.doubles(&v.data);
  }

  ckpt.meta.epoch = static_cast<int>(r.u32());
  ckpt.meta.best_val_loss = r.f64();
  ckpt.meta.seed = r.u64();
  ckpt.meta.infeasible_skipped = r.i64();
  r.expect_eof();
  return ckpt;
}

}  // namespace ctckit
