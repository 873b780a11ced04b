// ctckit/nn.h

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

#ifndef CTCKIT_NN_H_
#define CTCKIT_NN_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ctckit/matrix.h"

namespace ctckit {

enum class LayerKind { kFeedforward, kBiLstm, kSoftmaxOutput };
enum class Activation { kTanh, kLinear };

// For kBiLstm, output_dim is the cell count per direction; the layer emits
// the concatenation of both directions (2 * output_dim values per frame).
struct LayerSpec {
  LayerKind kind = LayerKind::kFeedforward;
  int input_dim = 0;
  int output_dim = 0;
  Activation activation = Activation::kTanh;

  int actual_output_dim() const { return kind == LayerKind::kBiLstm ? 2 * output_dim : output_dim; }
  bool operator==(const LayerSpec&) const = default;
};

LayerSpec feedforward_spec(int input_dim, int output_dim, Activation act = Activation::kTanh);
LayerSpec bilstm_spec(int input_dim, int cells_per_direction);
LayerSpec softmax_output_spec(int input_dim, int num_symbols);

// Activations a layer recorded during forward so backward can replay them.
struct LayerCache {
  Matrix input;
  Matrix output;
  std::vector<Matrix> aux;
};

// Named view of one parameter matrix (biases are n x 1 matrices).
struct ParamRef {
  std::string name;
  Matrix* mat;
};

class Layer {
 public:
  virtual ~Layer() = default;

  const LayerSpec& spec() const { return spec_; }

  // input is T x input_dim; returns T x actual_output_dim.  When cache is
  // non-null the layer records what backward needs.
  virtual Matrix forward(const Matrix& input, LayerCache* cache) const = 0;

  // grad_output is T x actual_output_dim.  Accumulates parameter gradients
  // into grads[offset .. offset+num_param_blocks) and returns the gradient
  // with respect to the layer input.
  virtual Matrix backward(const LayerCache& cache, const Matrix& grad_output,
                          std::vector<Matrix>* grads, std::size_t offset) const = 0;

  virtual int num_param_blocks() const = 0;
  virtual void append_param_refs(const std::string& prefix, std::vector<ParamRef>* out) = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;

  // Draws every weight and bias i.i.d. from Normal(0, std^2), in parameter
  // block order, row-major within each block.
  void init_normal(double std, std::mt19937_64* rng);

 protected:
  explicit Layer(const LayerSpec& spec) : spec_(spec) {}
  LayerSpec spec_;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec);

using LayerStack = std::vector<std::unique_ptr<Layer>>;

LayerStack clone_stack(const LayerStack& stack);

// Runs the stack over a T x D sequence.  caches, when non-null, is resized
// to one entry per layer.
Matrix stack_forward(const LayerStack& stack, const Matrix& input, std::vector<LayerCache>* caches);

// Reverse-mode sweep matching a stack_forward call.  grads must hold one
// zero-initialized Matrix per parameter block; offset points at the first
// block belonging to this stack.  Returns the gradient w.r.t. the stack
// input.
Matrix stack_backward(const LayerStack& stack, const std::vector<LayerCache>& caches,
                      const Matrix& grad_output, std::vector<Matrix>* grads, std::size_t offset);

int stack_num_param_blocks(const LayerStack& stack);

// Flat-indexable view over a set of parameter blocks, the substrate for
// gradient checking, Adam and checkpointing.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::vector<ParamRef> refs);

  const std::vector<ParamRef>& refs() const { return refs_; }
  std::size_t num_blocks() const { return refs_.size(); }
  std::size_t total_scalars() const { return total_; }

  double get_flat(std::size_t index) const;
  void set_flat(std::size_t index, double value);
  const std::string& block_name(std::size_t block) const { return refs_[block].name; }

 private:
  std::pair<std::size_t, std::size_t> locate(std::size_t index) const;
  std::vector<ParamRef> refs_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

std::vector<Matrix> zeros_like(const ParamSet& params);

// Euclidean norm over a gradient vector; used by the optional max-norm clip.
double gradient_norm(const std::vector<Matrix>& grads);
void scale_gradients(std::vector<Matrix>* grads, double factor);

}  // namespace ctckit

#endif  // CTCKIT_NN_H_
