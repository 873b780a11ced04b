// ctckit/nn.cc

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

#include "ctckit/nn.h"

#include <cmath>

#include "ctckit/error.h"

namespace ctckit {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class FeedforwardLayer : public Layer {
 public:
  explicit FeedforwardLayer(const LayerSpec& spec)
      : Layer(spec), weight_(spec.output_dim, spec.input_dim), bias_(spec.output_dim, 1) {}

  Matrix forward(const Matrix& input, LayerCache* cache) const override {
    require(input.cols == spec_.input_dim, "feedforward: input dim ", input.cols, " != expected ",
            spec_.input_dim);
    Matrix out(input.rows, spec_.output_dim);
    for (int t = 0; t < input.rows; ++t) {
      affine(weight_, input.row(t), bias_.data.data(), out.row(t));
      if (spec_.activation == Activation::kTanh) {
        double* row = out.row(t);
        for (int c = 0; c < out.cols; ++c) row[c] = std::tanh(row[c]);
      }
    }
    if (cache) {
      cache->input = input;
      cache->output = out;
      cache->aux.clear();
    }
    return out;
  }

  Matrix backward(const LayerCache& cache, const Matrix& grad_output, std::vector<Matrix>* grads,
                  std::size_t offset) const override {
    require(grad_output.rows == cache.output.rows && grad_output.cols == cache.output.cols,
            "feedforward backward: gradient shape does not match the recorded forward pass");
    Matrix& dw = (*grads)[offset];
    Matrix& db = (*grads)[offset + 1];
    Matrix grad_in(cache.input.rows, spec_.input_dim);
    std::vector<double> dz(spec_.output_dim);
    for (int t = 0; t < grad_output.rows; ++t) {
      const double* g = grad_output.row(t);
      const double* y = cache.output.row(t);
      for (int c = 0; c < spec_.output_dim; ++c) {
        dz[c] = spec_.activation == Activation::kTanh ? g[c] * (1.0 - y[c] * y[c]) : g[c];
      }
      add_outer(dw, dz.data(), cache.input.row(t));
      for (int c = 0; c < spec_.output_dim; ++c) db(c, 0) += dz[c];
      add_transpose_matvec(weight_, dz.data(), grad_in.row(t));
    }
    return grad_in;
  }

  int num_param_blocks() const override { return 2; }

  void append_param_refs(const std::string& prefix, std::vector<ParamRef>* out) override {
    out->push_back({prefix + "/w", &weight_});
    out->push_back({prefix + "/b", &bias_});
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<FeedforwardLayer>(*this); }

 private:
  Matrix weight_;  // output_dim x input_dim
  Matrix bias_;    // output_dim x 1
};

// Bidirectional LSTM.  Each direction owns an independent parameter set
// packed gate-major: rows [0,H) input gate, [H,2H) forget gate, [2H,3H)
// cell candidate, [3H,4H) output gate.  Standard sigmoid gates and tanh
// candidate, no peepholes, zero initial states.
class BiLstmLayer : public Layer {
 public:
  explicit BiLstmLayer(const LayerSpec& spec)
      : Layer(spec),
        w_in_{Matrix(4 * spec.output_dim, spec.input_dim), Matrix(4 * spec.output_dim, spec.input_dim)},
        w_rec_{Matrix(4 * spec.output_dim, spec.output_dim), Matrix(4 * spec.output_dim, spec.output_dim)},
        bias_{Matrix(4 * spec.output_dim, 1), Matrix(4 * spec.output_dim, 1)} {}

  Matrix forward(const Matrix& input, LayerCache* cache) const override {
    require(input.cols == spec_.input_dim, "bilstm: input dim ", input.cols, " != expected ",
            spec_.input_dim);
    const int t_len = input.rows;
    const int h_dim = spec_.output_dim;
    Matrix out(t_len, 2 * h_dim);
    // aux layout per direction: gates (T x 4H), cell (T x H), tanh_cell (T x H)
    std::vector<Matrix> aux(6);
    for (int dir = 0; dir < 2; ++dir) {
      aux[3 * dir + 0] = Matrix(t_len, 4 * h_dim);
      aux[3 * dir + 1] = Matrix(t_len, h_dim);
      aux[3 * dir + 2] = Matrix(t_len, h_dim);
      run_direction(input, dir, &aux[3 * dir], &out);
    }
    if (cache) {
      cache->input = input;
      cache->output = out;
      cache->aux = std::move(aux);
    }
    return out;
  }

  Matrix backward(const LayerCache& cache, const Matrix& grad_output, std::vector<Matrix>* grads,
                  std::size_t offset) const override {
    require(grad_output.rows == cache.output.rows && grad_output.cols == cache.output.cols,
            "bilstm backward: gradient shape does not match the recorded forward pass");
    Matrix grad_in(cache.input.rows, spec_.input_dim);
    for (int dir = 0; dir < 2; ++dir) {
      backprop_direction(cache, grad_output, dir, grads, offset, &grad_in);
    }
    return grad_in;
  }

  int num_param_blocks() const override { return 6; }

  void append_param_refs(const std::string& prefix, std::vector<ParamRef>* out) override {
    static const char* kDir[2] = {"fwd", "bwd"};
    for (int dir = 0; dir < 2; ++dir) {
      out->push_back({str_cat(prefix, "/w_in_", kDir[dir]), &w_in_[dir]});
      out->push_back({str_cat(prefix, "/w_rec_", kDir[dir]), &w_rec_[dir]});
      out->push_back({str_cat(prefix, "/b_", kDir[dir]), &bias_[dir]});
    }
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<BiLstmLayer>(*this); }

 private:
  // dir 0 runs left to right and writes output columns [0,H);
  // dir 1 runs right to left and writes columns [H,2H).
  void run_direction(const Matrix& input, int dir, Matrix* aux, Matrix* out) const {
    const int t_len = input.rows;
    const int h_dim = spec_.output_dim;
    Matrix& gates = aux[0];
    Matrix& cell = aux[1];
    Matrix& tanh_cell = aux[2];
    std::vector<double> h_prev(h_dim, 0.0), c_prev(h_dim, 0.0), z(4 * h_dim);
    for (int step = 0; step < t_len; ++step) {
      const int t = dir == 0 ? step : t_len - 1 - step;
      affine(w_in_[dir], input.row(t), bias_[dir].data.data(), z.data());
      for (int r = 0; r < 4 * h_dim; ++r) {
        const double* wr = w_rec_[dir].row(r);
        double acc = z[r];
        for (int c = 0; c < h_dim; ++c) acc += wr[c] * h_prev[c];
        z[r] = acc;
      }
      double* gate_row = gates.row(t);
      double* c_row = cell.row(t);
      double* tc_row = tanh_cell.row(t);
      double* h_out = out->row(t) + dir * h_dim;
      for (int j = 0; j < h_dim; ++j) {
        const double gi = sigmoid(z[j]);
        const double gf = sigmoid(z[h_dim + j]);
        const double gg = std::tanh(z[2 * h_dim + j]);
        const double go = sigmoid(z[3 * h_dim + j]);
        gate_row[j] = gi;
        gate_row[h_dim + j] = gf;
        gate_row[2 * h_dim + j] = gg;
        gate_row[3 * h_dim + j] = go;
        const double c_new = gf * c_prev[j] + gi * gg;
        c_row[j] = c_new;
        const double tc = std::tanh(c_new);
        tc_row[j] = tc;
        const double h_new = go * tc;
        h_out[j] = h_new;
        h_prev[j] = h_new;
        c_prev[j] = c_new;
      }
    }
  }

  void backprop_direction(const LayerCache& cache, const Matrix& grad_output, int dir,
                          std::vector<Matrix>* grads, std::size_t offset, Matrix* grad_in) const {
    const int t_len = cache.input.rows;
    const int h_dim = spec_.output_dim;
    const Matrix& gates = cache.aux[3 * dir + 0];
    const Matrix& cell = cache.aux[3 * dir + 1];
    const Matrix& tanh_cell = cache.aux[3 * dir + 2];
    Matrix& dw_in = (*grads)[offset + 3 * dir];
    Matrix& dw_rec = (*grads)[offset + 3 * dir + 1];
    Matrix& db = (*grads)[offset + 3 * dir + 2];

    std::vector<double> dh_next(h_dim, 0.0), dc_next(h_dim, 0.0), dz(4 * h_dim);
    for (int step = t_len - 1; step >= 0; --step) {
      const int t = dir == 0 ? step : t_len - 1 - step;
      const int t_prev = dir == 0 ? t - 1 : t + 1;  // time of the preceding state
      const bool has_prev = step > 0;
      const double* g_out = grad_output.row(t) + dir * h_dim;
      const double* gate_row = gates.row(t);
      const double* c_row = cell.row(t);
      const double* tc_row = tanh_cell.row(t);
      for (int j = 0; j < h_dim; ++j) {
        const double gi = gate_row[j];
        const double gf = gate_row[h_dim + j];
        const double gg = gate_row[2 * h_dim + j];
        const double go = gate_row[3 * h_dim + j];
        const double tc = tc_row[j];
        const double dh = g_out[j] + dh_next[j];
        const double d_go = dh * tc;
        const double dc = dc_next[j] + dh * go * (1.0 - tc * tc);
        const double c_before = has_prev ? cell(t_prev, j) : 0.0;
        const double d_gi = dc * gg;
        const double d_gg = dc * gi;
        const double d_gf = dc * c_before;
        dc_next[j] = dc * gf;
        dz[j] = d_gi * gi * (1.0 - gi);
        dz[h_dim + j] = d_gf * gf * (1.0 - gf);
        dz[2 * h_dim + j] = d_gg * (1.0 - gg * gg);
        dz[3 * h_dim + j] = d_go * go * (1.0 - go);
      }
      add_outer(dw_in, dz.data(), cache.input.row(t));
      if (has_prev) {
        const double* h_before = cache.output.row(t_prev) + dir * h_dim;
        add_outer(dw_rec, dz.data(), h_before);
      }
      for (int r = 0; r < 4 * h_dim; ++r) db(r, 0) += dz[r];
      add_transpose_matvec(w_in_[dir], dz.data(), grad_in->row(t));
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      add_transpose_matvec(w_rec_[dir], dz.data(), dh_next.data());
    }
  }

  Matrix w_in_[2];   // 4H x D
  Matrix w_rec_[2];  // 4H x H
  Matrix bias_[2];   // 4H x 1
};

}  // namespace

LayerSpec feedforward_spec(int input_dim, int output_dim, Activation act) {
  require(input_dim > 0 && output_dim > 0, "feedforward_spec: dims must be positive");
  return LayerSpec{LayerKind::kFeedforward, input_dim, output_dim, act};
}

LayerSpec bilstm_spec(int input_dim, int cells_per_direction) {
  require(input_dim > 0 && cells_per_direction > 0, "bilstm_spec: dims must be positive");
  return LayerSpec{LayerKind::kBiLstm, input_dim, cells_per_direction, Activation::kTanh};
}

LayerSpec softmax_output_spec(int input_dim, int num_symbols) {
  require(input_dim > 0 && num_symbols >= 2, "softmax_output_spec: need positive dims, >= 2 symbols");
  return LayerSpec{LayerKind::kSoftmaxOutput, input_dim, num_symbols, Activation::kLinear};
}

void Layer::init_normal(double std, std::mt19937_64* rng) {
  require(std >= 0.0, "init_normal: std must be >= 0");
  std::normal_distribution<double> dist(0.0, std == 0.0 ? 1.0 : std);
  std::vector<ParamRef> refs;
  append_param_refs("", &refs);
  for (auto& ref : refs) {
    for (double& v : ref.mat->data) v = std == 0.0 ? 0.0 : dist(*rng);
  }
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::kFeedforward:
      return std::make_unique<FeedforwardLayer>(spec);
    case LayerKind::kBiLstm:
      return std::make_unique<BiLstmLayer>(spec);
    case LayerKind::kSoftmaxOutput: {
      LayerSpec linear = spec;
      linear.activation = Activation::kLinear;
      return std::make_unique<FeedforwardLayer>(linear);
    }
  }
  raise("make_layer: unknown layer kind");
}

LayerStack clone_stack(const LayerStack& stack) {
  LayerStack copy;
  copy.reserve(stack.size());
  for (const auto& layer : stack) copy.push_back(layer->clone());
  return copy;
}

Matrix stack_forward(const LayerStack& stack, const Matrix& input, std::vector<LayerCache>* caches) {
  if (caches) caches->resize(stack.size());
  Matrix current = input;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    current = stack[i]->forward(current, caches ? &(*caches)[i] : nullptr);
  }
  return current;
}

Matrix stack_backward(const LayerStack& stack, const std::vector<LayerCache>& caches,
                      const Matrix& grad_output, std::vector<Matrix>* grads, std::size_t offset) {
  require(caches.size() == stack.size(), "stack_backward: no forward pass recorded for this stack");
  // block offsets per layer
  std::vector<std::size_t> layer_offset(stack.size());
  std::size_t cursor = offset;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    layer_offset[i] = cursor;
    cursor += static_cast<std::size_t>(stack[i]->num_param_blocks());
  }
  Matrix grad = grad_output;
  for (std::size_t i = stack.size(); i-- > 0;) {
    grad = stack[i]->backward(caches[i], grad, grads, layer_offset[i]);
  }
  return grad;
}

int stack_num_param_blocks(const LayerStack& stack) {
  int n = 0;
  for (const auto& layer : stack) n += layer->num_param_blocks();
  return n;
}

ParamSet::ParamSet(std::vector<ParamRef> refs) : refs_(std::move(refs)) {
  offsets_.reserve(refs_.size());
  for (const auto& ref : refs_) {
    offsets_.push_back(total_);
    total_ += ref.mat->size();
  }
}

std::pair<std::size_t, std::size_t> ParamSet::locate(std::size_t index) const {
  require(index < total_, "ParamSet: flat index ", index, " out of range (", total_, " scalars)");
  std::size_t lo = 0, hi = refs_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (offsets_[mid] <= index) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return {lo, index - offsets_[lo]};
}

double ParamSet::get_flat(std::size_t index) const {
  auto [block, within] = locate(index);
  return refs_[block].mat->data[within];
}

void ParamSet::set_flat(std::size_t index, double value) {
  auto [block, within] = locate(index);
  refs_[block].mat->data[within] = value;
}

std::vector<Matrix> zeros_like(const ParamSet& params) {
  std::vector<Matrix> out;
  out.reserve(params.num_blocks());
  for (const auto& ref : params.refs()) out.emplace_back(ref.mat->rows, ref.mat->cols);
  return out;
}

double gradient_norm(const std::vector<Matrix>& grads) {
  double sum = 0.0;
  for (const auto& g : grads)
    for (double v : g.data) sum += v * v;
  return std::sqrt(sum);
}

void scale_gradients(std::vector<Matrix>* grads, double factor) {
  for (auto& g : *grads)
    for (double& v : g.data) v *= factor;
}

}  // namespace ctckit
