/*
 * Copyright 2026 The patchqa Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "patchqa/qa_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "patchqa/error.hpp"
#include "patchqa/random.hpp"

namespace patchqa::qa {

namespace {

constexpr char kCheckpointMagic[] = "patchqa-checkpoint";
constexpr int kCheckpointVersion = 1;

// Activations of one LSTM direction over the real tokens of a sequence.
// Step s reads input position Position(s).
struct LstmTrace {
  bool reverse = false;
  std::size_t length = 0;
  Matrix gates;  // length x 4H, post-activation i, f, g, o
  Matrix cell;   // length x H
  Matrix hidden; // length x H

  std::size_t Position(std::size_t step) const {
    return reverse ? length - 1 - step : step;
  }
};

LstmTrace RunLstm(const LstmCellParams& p, const Matrix& input,
                  std::size_t length, bool reverse) {
  const std::size_t H = p.hidden();
  const std::size_t D = p.input_dim();
  LstmTrace tr;
  tr.reverse = reverse;
  tr.length = length;
  tr.gates = Matrix(length, 4 * H);
  tr.cell = Matrix(length, H);
  tr.hidden = Matrix(length, H);

  std::vector<double> z(4 * H);
  for (std::size_t s = 0; s < length; ++s) {
    const auto x = input.row(tr.Position(s));
    std::copy(p.bias.begin(), p.bias.end(), z.begin());
    for (std::size_t r = 0; r < 4 * H; ++r) {
      const double* w = p.input_weights.row(r).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < D; ++k) acc += w[k] * x[k];
      if (s > 0) {
        const double* u = p.recurrent_weights.row(r).data();
        const auto h_prev = tr.hidden.row(s - 1);
        for (std::size_t k = 0; k < H; ++k) acc += u[k] * h_prev[k];
      }
      z[r] += acc;
    }
    auto gate = tr.gates.row(s);
    auto c = tr.cell.row(s);
    auto h = tr.hidden.row(s);
    for (std::size_t k = 0; k < H; ++k) {
      const double i = Sigmoid(z[k]);
      const double f = Sigmoid(z[H + k]);
      const double g = std::tanh(z[2 * H + k]);
      const double o = Sigmoid(z[3 * H + k]);
      const double c_prev = s > 0 ? tr.cell(s - 1, k) : 0.0;
      gate[k] = i;
      gate[H + k] = f;
      gate[2 * H + k] = g;
      gate[3 * H + k] = o;
      c[k] = f * c_prev + i * g;
      h[k] = o * std::tanh(c[k]);
    }
  }
  return tr;
}

// Back-propagates d loss / d h (rows indexed by input position) through one
// direction, accumulating parameter gradients and optionally input gradients.
void BackpropLstm(const LstmCellParams& p, const LstmTrace& tr,
                  const Matrix& input, const Matrix& d_out,
                  std::size_t out_offset, LstmCellParams& grad,
                  Matrix* d_input) {
  const std::size_t H = p.hidden();
  const std::size_t D = p.input_dim();
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dz(4 * H);
  for (std::size_t s = tr.length; s-- > 0;) {
    const std::size_t pos = tr.Position(s);
    const auto gate = tr.gates.row(s);
    const auto c = tr.cell.row(s);
    for (std::size_t k = 0; k < H; ++k) {
      const double dh = d_out(pos, out_offset + k) + dh_next[k];
      const double i = gate[k], f = gate[H + k], g = gate[2 * H + k],
                   o = gate[3 * H + k];
      const double tc = std::tanh(c[k]);
      const double c_prev = s > 0 ? tr.cell(s - 1, k) : 0.0;
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * g * i * (1.0 - i);
      dz[H + k] = dc * c_prev * f * (1.0 - f);
      dz[2 * H + k] = dc * i * (1.0 - g * g);
      dz[3 * H + k] = dh * tc * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    const auto x = input.row(pos);
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (std::size_t r = 0; r < 4 * H; ++r) {
      const double d = dz[r];
      grad.bias[r] += d;
      double* gw = &grad.input_weights(r, 0);
      for (std::size_t k = 0; k < D; ++k) gw[k] += d * x[k];
      if (s > 0) {
        const auto h_prev = tr.hidden.row(s - 1);
        double* gu = &grad.recurrent_weights(r, 0);
        const double* u = p.recurrent_weights.row(r).data();
        for (std::size_t k = 0; k < H; ++k) {
          gu[k] += d * h_prev[k];
          dh_next[k] += u[k] * d;
        }
      }
      if (d_input != nullptr) {
        const double* w = p.input_weights.row(r).data();
        auto dx = d_input->row(pos);
        for (std::size_t k = 0; k < D; ++k) dx[k] += w[k] * d;
      }
    }
  }
}

struct BiLstmPass {
  LstmTrace fwd, bwd;
  Matrix out;  // N x 2H, zero past length
};

BiLstmPass RunBiLstm(const QaModel& model, const embed::SequenceMatrix& m) {
  if (m.rows.cols() != model.input_dim()) {
    throw InvalidArgument("input dim " + std::to_string(m.rows.cols()) +
                          " does not match model input dim " +
                          std::to_string(model.input_dim()));
  }
  const std::size_t H = model.hidden();
  const std::size_t L = std::min(m.length, m.rows.rows());
  BiLstmPass pass;
  pass.fwd = RunLstm(model.params().forward, m.rows, L, false);
  pass.bwd = RunLstm(model.params().backward, m.rows, L, true);
  pass.out = Matrix(m.rows.rows(), 2 * H);
  for (std::size_t s = 0; s < L; ++s) {
    const auto hf = pass.fwd.hidden.row(s);
    std::copy(hf.begin(), hf.end(), &pass.out(s, 0));
    const auto hb = pass.bwd.hidden.row(s);
    std::copy(hb.begin(), hb.end(), &pass.out(pass.bwd.Position(s), H));
  }
  return pass;
}

// Everything the backward pass needs from one scored pair.
struct ScoreTrace {
  BiLstmPass bug, desc;
  std::size_t bug_len = 0, desc_len = 0;
  Matrix alpha;  // desc_len x bug_len
  Matrix att;    // N x 2H, zero past desc_len
  double dot = 0.0, bug_norm = 0.0, desc_norm = 0.0, cosine = 0.0;
  double score = 0.5;
};

// Softmax of logits[0..n) with max subtraction.
void SoftmaxInPlace(std::span<double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (auto& x : logits) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (auto& x : logits) x /= sum;
}

ScoreTrace Forward(const QaModel& model, const BatchExample& ex) {
  if (ex.bug.rows.rows() != ex.description.rows.rows()) {
    throw InvalidArgument("bug and description differ in max_seq_len");
  }
  ScoreTrace t;
  t.bug = RunBiLstm(model, ex.bug);
  t.desc = RunBiLstm(model, ex.description);
  t.bug_len = t.bug.fwd.length;
  t.desc_len = t.desc.fwd.length;
  const std::size_t d = model.output_dim();
  t.att = Matrix(ex.bug.rows.rows(), d);
  if (t.bug_len > 0 && t.desc_len > 0) {
    t.alpha = Matrix(t.desc_len, t.bug_len);
    for (std::size_t j = 0; j < t.desc_len; ++j) {
      auto a = t.alpha.row(j);
      const auto xc = t.desc.out.row(j);
      for (std::size_t n = 0; n < t.bug_len; ++n) {
        a[n] = Dot(t.bug.out.row(n), xc);
      }
      SoftmaxInPlace(a);
      auto att = t.att.row(j);
      for (std::size_t n = 0; n < t.bug_len; ++n) {
        Axpy(a[n], t.bug.out.row(n), att);
      }
    }
  }
  t.dot = Dot(t.bug.out.flat(), t.att.flat());
  t.bug_norm = std::sqrt(Dot(t.bug.out.flat(), t.bug.out.flat()));
  t.desc_norm = std::sqrt(Dot(t.att.flat(), t.att.flat()));
  t.cosine = (t.bug_norm > 0.0 && t.desc_norm > 0.0)
                 ? t.dot / (t.bug_norm * t.desc_norm)
                 : 0.0;
  // Rounding can push |cos| a hair past 1.
  t.score = Sigmoid(std::clamp(t.cosine, -1.0, 1.0));
  return t;
}

void WriteDouble(std::ostream& out, double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  out.write(buf, ptr - buf);
}

void WriteTensor(std::ostream& out, const std::string& name,
                 std::span<const double> data, std::size_t rows,
                 std::size_t cols) {
  out << "tensor " << name << ' ' << rows << ' ' << cols << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c > 0) out << ' ';
      WriteDouble(out, data[r * cols + c]);
    }
    out << '\n';
  }
}

class CheckpointReader {
 public:
  explicit CheckpointReader(std::istream& in) : in_(in) {}

  std::istringstream NextLine() {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ParseError("unexpected end of checkpoint", line_ + 1);
    }
    ++line_;
    return std::istringstream(line);
  }

  template <typename T>
  T Field(const std::string& key) {
    auto ss = NextLine();
    std::string k;
    T value{};
    if (!(ss >> k) || k != key || !(ss >> value)) {
      throw ParseError("expected \"" + key + " <value>\"", line_);
    }
    return value;
  }

  void Tensor(const std::string& name, std::span<double> data,
              std::size_t rows, std::size_t cols) {
    auto header = NextLine();
    std::string kw, n;
    std::size_t r = 0, c = 0;
    if (!(header >> kw >> n >> r >> c) || kw != "tensor" || n != name) {
      throw ParseError("expected tensor \"" + name + "\"", line_);
    }
    if (r != rows || c != cols) {
      throw ParseError("tensor \"" + name + "\" has shape " +
                           std::to_string(r) + "x" + std::to_string(c) +
                           ", expected " + std::to_string(rows) + "x" +
                           std::to_string(cols),
                       line_);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      auto ss = NextLine();
      std::string tok;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!(ss >> tok)) throw ParseError("short tensor row", line_);
        double x = 0.0;
        const auto [ptr, ec] =
            std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc() || ptr != tok.data() + tok.size() ||
            !std::isfinite(x)) {
          throw ParseError("bad tensor value \"" + tok + "\"", line_);
        }
        data[i * cols + j] = x;
      }
    }
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void ModelConfig::Validate() const {
  if (max_seq_len == 0) throw InvalidArgument("max_seq_len must be positive");
  if (hidden_size == 0) throw InvalidArgument("hidden_size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (epochs <= 0) throw InvalidArgument("epochs must be positive");
  if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
}

LstmCellParams::LstmCellParams(std::size_t hidden, std::size_t input_dim)
    : input_weights(4 * hidden, input_dim),
      recurrent_weights(4 * hidden, hidden),
      bias(4 * hidden, 0.0) {}

std::vector<std::span<double>> QaParams::Tensors() {
  return {forward.input_weights.flat(), forward.recurrent_weights.flat(),
          forward.bias,                 backward.input_weights.flat(),
          backward.recurrent_weights.flat(), backward.bias};
}

std::vector<std::span<const double>> QaParams::Tensors() const {
  return {forward.input_weights.flat(), forward.recurrent_weights.flat(),
          forward.bias,                 backward.input_weights.flat(),
          backward.recurrent_weights.flat(), backward.bias};
}

std::vector<std::string> QaParams::TensorNames() const {
  return {"forward.input_weights",  "forward.recurrent_weights",
          "forward.bias",           "backward.input_weights",
          "backward.recurrent_weights", "backward.bias"};
}

void QaParams::SetZero() {
  for (auto t : Tensors()) std::fill(t.begin(), t.end(), 0.0);
}

bool QaParams::AllFinite() const {
  for (auto t : Tensors()) {
    for (double x : t) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

QaModel::QaModel(std::size_t input_dim, ModelConfig config)
    : input_dim_(input_dim),
      config_(config),
      params_(config.hidden_size, input_dim) {
  config_.Validate();
  if (input_dim == 0) throw InvalidArgument("input dim must be positive");
}

QaModel QaModel::Initialize(std::size_t input_dim, ModelConfig config) {
  QaModel model(input_dim, config);
  const double bound =
      1.0 / std::sqrt(static_cast<double>(input_dim + config.hidden_size));
  Rng rng(Mix64(config.seed ^ 0x696e6974ULL));
  for (auto t : model.params_.Tensors()) {
    for (auto& x : t) x = rng.Uniform(-bound, bound);
  }
  return model;
}

Matrix BiLstmForward(const QaModel& model, const embed::SequenceMatrix& m) {
  return RunBiLstm(model, m).out;
}

std::vector<double> AttentionWeights(const Matrix& e_b,
                                     std::span<const double> xc,
                                     std::span<const std::uint8_t> mask) {
  if (xc.size() != e_b.cols()) {
    throw InvalidArgument("attention query width does not match e_b");
  }
  if (mask.size() != e_b.rows()) {
    throw InvalidArgument("mask length does not match e_b rows");
  }
  std::vector<double> alpha(e_b.rows(), 0.0);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < e_b.rows(); ++n) {
    if (!mask[n]) continue;
    alpha[n] = Dot(e_b.row(n), xc);
    mx = std::max(mx, alpha[n]);
  }
  if (mx == -std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("attention over a fully masked sequence");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < e_b.rows(); ++n) {
    if (!mask[n]) continue;
    alpha[n] = std::exp(alpha[n] - mx);
    sum += alpha[n];
  }
  for (auto& a : alpha) a /= sum;
  return alpha;
}

std::vector<double> AttentionApply(std::span<const double> alpha,
                                   const Matrix& e_b) {
  if (alpha.size() != e_b.rows()) {
    throw InvalidArgument("alpha length does not match e_b rows");
  }
  std::vector<double> att(e_b.cols(), 0.0);
  for (std::size_t n = 0; n < e_b.rows(); ++n) {
    if (alpha[n] != 0.0) Axpy(alpha[n], e_b.row(n), att);
  }
  return att;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine of unequal lengths");
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

double ScoreRepresentations(std::span<const double> re_b,
                            std::span<const double> re_c) {
  return Sigmoid(Cosine(re_b, re_c));
}

Representations Represent(const QaModel& model, const BatchExample& ex) {
  const ScoreTrace t = Forward(model, ex);
  const auto b = t.bug.out.flat();
  const auto c = t.att.flat();
  return {{b.begin(), b.end()}, {c.begin(), c.end()}};
}

double Score(const QaModel& model, const BatchExample& ex) {
  return Forward(model, ex).score;
}

double Loss(double score, int label) {
  return label ? -std::log(score) : -std::log1p(-score);
}

double LossGradient(double score, int label) {
  return label ? -1.0 / score : 1.0 / (1.0 - score);
}

ExampleGradient AccumulateGradient(const QaModel& model, const BatchExample& ex,
                                   QaParams& grad, Matrix* d_bug_input,
                                   Matrix* d_description_input) {
  const ScoreTrace t = Forward(model, ex);
  ExampleGradient result{t.score, Loss(t.score, ex.label)};
  if (d_bug_input) *d_bug_input = Matrix(ex.bug.rows.rows(), ex.bug.rows.cols());
  if (d_description_input) {
    *d_description_input =
        Matrix(ex.description.rows.rows(), ex.description.rows.cols());
  }
  if (t.bug_norm == 0.0 || t.desc_norm == 0.0) return result;

  // d loss / d cosine through the sigmoid.
  const double d_cos =
      LossGradient(t.score, ex.label) * t.score * (1.0 - t.score);
  const std::size_t N = t.bug.out.rows();
  const std::size_t d = model.output_dim();
  const double inv_nn = 1.0 / (t.bug_norm * t.desc_norm);
  const double cb = t.cosine / (t.bug_norm * t.bug_norm);
  const double cc = t.cosine / (t.desc_norm * t.desc_norm);

  Matrix d_eb(N, d), d_ec(N, d), d_att(N, d);
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const double b = t.bug.out(r, k), c = t.att(r, k);
      d_eb(r, k) = d_cos * (c * inv_nn - cb * b);
      d_att(r, k) = d_cos * (b * inv_nn - cc * c);
    }
  }

  std::vector<double> d_alpha(t.bug_len);
  for (std::size_t j = 0; j < t.desc_len; ++j) {
    const auto a = t.alpha.row(j);
    const auto da = d_att.row(j);
    double weighted = 0.0;
    for (std::size_t n = 0; n < t.bug_len; ++n) {
      d_alpha[n] = Dot(da, t.bug.out.row(n));
      weighted += a[n] * d_alpha[n];
      Axpy(a[n], da, d_eb.row(n));
    }
    const auto xc = t.desc.out.row(j);
    auto d_xc = d_ec.row(j);
    for (std::size_t n = 0; n < t.bug_len; ++n) {
      const double d_logit = a[n] * (d_alpha[n] - weighted);
      Axpy(d_logit, xc, d_eb.row(n));
      Axpy(d_logit, t.bug.out.row(n), d_xc);
    }
  }

  const auto& p = model.params();
  const std::size_t H = model.hidden();
  BackpropLstm(p.forward, t.bug.fwd, ex.bug.rows, d_eb, 0, grad.forward,
               d_bug_input);
  BackpropLstm(p.backward, t.bug.bwd, ex.bug.rows, d_eb, H, grad.backward,
               d_bug_input);
  BackpropLstm(p.forward, t.desc.fwd, ex.description.rows, d_ec, 0,
               grad.forward, d_description_input);
  BackpropLstm(p.backward, t.desc.bwd, ex.description.rows, d_ec, H,
               grad.backward, d_description_input);
  return result;
}

AdamOptimizer::AdamOptimizer(const QaParams& shape, double learning_rate,
                             double beta1, double beta2, double eps)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      m_(shape),
      v_(shape) {
  m_.SetZero();
  v_.SetZero();
}

void AdamOptimizer::Step(QaParams& params, const QaParams& grad) {
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  auto p = params.Tensors();
  const auto g = grad.Tensors();
  auto m = m_.Tensors();
  auto v = v_.Tensors();
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t i = 0; i < p[t].size(); ++i) {
      m[t][i] = beta1_ * m[t][i] + (1.0 - beta1_) * g[t][i];
      v[t][i] = beta2_ * v[t][i] + (1.0 - beta2_) * g[t][i] * g[t][i];
      const double m_hat = m[t][i] / c1;
      const double v_hat = v[t][i] / c2;
      p[t][i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }
}

TrainResult Train(QaModel model, const std::vector<BatchExample>& examples,
                  const ModelConfig& config) {
  config.Validate();
  if (examples.empty()) throw InvalidArgument("no training examples");

  AdamOptimizer adam(model.params(), config.learning_rate);
  QaParams grad(model.params());
  Rng shuffle_rng(Mix64(config.seed ^ 0x73687566ULL));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result{std::move(model), {}};
  QaModel& m = result.model;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      grad.SetZero();
      double batch_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        batch_loss += AccumulateGradient(m, examples[order[i]], grad).loss;
      }
      if (!std::isfinite(batch_loss) || !grad.AllFinite()) {
        throw Error("non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch " + std::to_string(batch_index));
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto g : grad.Tensors()) {
        for (auto& x : g) x *= scale;
      }
      adam.Step(m.params(), grad);
      epoch_loss += batch_loss;
    }
    result.epoch_loss.push_back(epoch_loss /
                                static_cast<double>(examples.size()));
  }
  return result;
}

Prediction Predict(const QaModel& model, const BatchExample& ex,
                   double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("threshold must lie in [0, 1]");
  }
  const double s = Score(model, ex);
  return {s >= threshold ? 1 : 0, s};
}

void WriteCheckpoint(const QaModel& model, std::ostream& out) {
  const ModelConfig& c = model.config();
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "input_dim " << model.input_dim() << '\n';
  out << "max_seq_len " << c.max_seq_len << '\n';
  out << "hidden_size " << c.hidden_size << '\n';
  out << "learning_rate ";
  WriteDouble(out, c.learning_rate);
  out << '\n';
  out << "epochs " << c.epochs << '\n';
  out << "batch_size " << c.batch_size << '\n';
  out << "seed " << c.seed << '\n';
  out << "embedding "
      << (model.embedding_source().empty() ? "-" : model.embedding_source())
      << '\n';
  const auto names = model.params().TensorNames();
  const auto tensors = model.params().Tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::size_t cols =
        (i % 3 == 0) ? model.input_dim() : (i % 3 == 1 ? c.hidden_size : 1);
    WriteTensor(out, names[i], tensors[i], tensors[i].size() / cols, cols);
  }
  out << "end\n";
}

QaModel ReadCheckpoint(std::istream& in) {
  CheckpointReader reader(in);
  {
    auto ss = reader.NextLine();
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != kCheckpointMagic) {
      throw ParseError("not a patchqa checkpoint", reader.line());
    }
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " +
                           std::to_string(version),
                       reader.line());
    }
  }
  const auto input_dim = reader.Field<std::size_t>("input_dim");
  ModelConfig c;
  c.max_seq_len = reader.Field<std::size_t>("max_seq_len");
  c.hidden_size = reader.Field<std::size_t>("hidden_size");
  {
    const auto lr = reader.Field<std::string>("learning_rate");
    const auto [ptr, ec] =
        std::from_chars(lr.data(), lr.data() + lr.size(), c.learning_rate);
    if (ec != std::errc()) throw ParseError("bad learning_rate", reader.line());
  }
  c.epochs = reader.Field<int>("epochs");
  c.batch_size = reader.Field<std::size_t>("batch_size");
  c.seed = reader.Field<std::uint64_t>("seed");
  auto source = reader.Field<std::string>("embedding");

  QaModel model = [&] {
    try {
      return QaModel(input_dim, c);
    } catch (const InvalidArgument& e) {
      throw ParseError(std::string("invalid checkpoint config: ") + e.what());
    }
  }();
  if (source != "-") model.set_embedding_source(std::move(source));
  const auto names = model.params().TensorNames();
  auto tensors = model.params().Tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::size_t cols =
        (i % 3 == 0) ? input_dim : (i % 3 == 1 ? c.hidden_size : 1);
    reader.Tensor(names[i], tensors[i], tensors[i].size() / cols, cols);
  }
  auto tail = reader.NextLine();
  std::string end;
  if (!(tail >> end) || end != "end") {
    throw ParseError("missing checkpoint terminator", reader.line());
  }
  return model;
}

void SaveCheckpoint(const QaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  WriteCheckpoint(model, out);
}

QaModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  return ReadCheckpoint(in);
}

}  // namespace patchqa::qa
