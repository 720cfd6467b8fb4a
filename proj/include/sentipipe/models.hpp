#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentipipe/autodiff.hpp"
#include "sentipipe/embed.hpp"
#include "sentipipe/reformulate.hpp"
#include "sentipipe/rng.hpp"
#include "sentipipe/tensor.hpp"

namespace sentipipe::models {

using nn::Parameter;
using nn::Tape;
using nn::Tensor;

// Token matrix geometry for the classic families: every encoded sample is
// truncated or zero-padded to exactly max_tokens rows.
struct SequenceSpec {
  size_t max_tokens = 50;
  size_t dim = 300;
};

// One sample, encoded for whichever family consumes it.
struct EncodedInput {
  // classic families: s x d token matrix (1 x d average for linear)
  Tensor matrix;
  size_t length = 0;  // rows actually filled, <= max_tokens
  // transformer: fixed-length id sequences
  std::vector<size_t> token_ids;
  std::vector<size_t> segment_ids;
  std::vector<uint8_t> attention_mask;
};

Tensor encode_tokens(const SequenceSpec& spec, const embed::EmbeddingTable& table,
                     const std::vector<std::string>& tokens);

// Word-level vocabulary with reserved ids for the structural tokens.
class Vocab {
 public:
  static constexpr size_t kPad = 0, kUnk = 1, kCls = 2, kSep = 3, kMask = 4;

  static Vocab build(const std::vector<std::vector<std::string>>& documents,
                     size_t min_freq = 1, const std::string& mask_token = "MASK");

  size_t id(const std::string& token) const;  // kUnk when absent
  const std::string& token(size_t id) const { return tokens_.at(id); }
  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& mask_token() const { return tokens_[kMask]; }

  static Vocab from_token_list(std::vector<std::string> tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t> ids_;
};

// [CLS] a [SEP] (b [SEP]) padded to max_len. Segment ids are 0 up to and
// including the first [SEP] and 1 for every later position; attention mask
// is 1 on real tokens. When the pair does not fit, sentence_a is truncated
// from the right and sentence_b is kept whole; if even an empty sentence_a
// does not fit, InputError.
EncodedInput encode_pair(const Vocab& vocab, const reform::ReformulatedInput& input,
                         size_t max_len);

enum class Family { Linear, Cnn, Lstm, BiLstm, Transformer };
Family family_from_string(const std::string& s);
std::string family_to_string(Family f);

using ConfigMap = std::map<std::string, double>;

class Classifier {
 public:
  enum class Mode { Training, Evaluation };

  virtual ~Classifier() = default;

  Family family() const { return family_; }
  Mode mode() const { return mode_; }
  void set_mode(Mode m) { mode_ = m; }
  size_t num_classes() const { return classes_; }

  const std::vector<Parameter*>& parameters() { return params_; }

  // Builds the probability node for one sample. Dropout is applied only in
  // Training mode and only when an RNG is supplied.
  virtual Tape::Var build_probs(Tape& tape, const EncodedInput& input, Rng* dropout) = 0;

  // Training loss for one sample; cross entropy by default, families may
  // override (the linear baseline uses hinge + L2).
  virtual Tape::Var build_loss(Tape& tape, const EncodedInput& input, size_t gold,
                               Rng* dropout);

  std::vector<double> forward(const EncodedInput& input);  // dropout-free
  size_t predict(const EncodedInput& input);  // argmax, ties to lowest index

  virtual ConfigMap config() const = 0;
  virtual const Vocab* vocab() const { return nullptr; }

 protected:
  Classifier(Family family, size_t classes) : family_(family), classes_(classes) {}
  void register_param(Parameter& p) { params_.push_back(&p); }
  bool dropout_active(const Rng* rng) const {
    return mode_ == Mode::Training && rng != nullptr;
  }

  Family family_;
  size_t classes_;
  Mode mode_ = Mode::Training;
  std::vector<Parameter*> params_;
};

struct LinearConfig {
  size_t dim = 300;
  size_t classes = 3;
  double l2 = 1e-4;    // penalty weight on W, grid-searchable
  double margin = 1.0;
};

class LinearModel final : public Classifier {
 public:
  LinearModel(const LinearConfig& cfg, uint64_t seed);
  Tape::Var build_probs(Tape& tape, const EncodedInput& input, Rng* dropout) override;
  Tape::Var build_loss(Tape& tape, const EncodedInput& input, size_t gold,
                       Rng* dropout) override;
  ConfigMap config() const override;

 private:
  LinearConfig cfg_;
  Parameter weight_, bias_;
};

struct CnnConfig {
  size_t max_tokens = 50;
  size_t dim = 300;
  std::vector<size_t> windows = {2, 3, 4, 5};
  size_t filters = 100;
  size_t classes = 3;
  double dropout = 0.5;
  bool hidden_fc = false;  // optional 40-unit layer before the output
  size_t hidden_dim = 40;
};

class CnnModel final : public Classifier {
 public:
  CnnModel(const CnnConfig& cfg, uint64_t seed);
  Tape::Var build_probs(Tape& tape, const EncodedInput& input, Rng* dropout) override;
  ConfigMap config() const override;
  size_t feature_dim() const { return cfg_.windows.size() * cfg_.filters; }

 private:
  CnnConfig cfg_;
  std::vector<Parameter> conv_w_, conv_b_;  // per window: (h*d x f), (1 x f)
  Parameter hidden_w_, hidden_b_;           // used when hidden_fc
  Parameter out_w_, out_b_;
};

struct LstmConfig {
  size_t max_tokens = 50;
  size_t dim = 300;  // cell dimension equals the embedding dimension
  size_t fc_dim = 40;
  size_t classes = 3;
  double dropout = 0.5;
  bool bidirectional = false;
};

class LstmModel final : public Classifier {
 public:
  LstmModel(const LstmConfig& cfg, uint64_t seed);
  Tape::Var build_probs(Tape& tape, const EncodedInput& input, Rng* dropout) override;
  ConfigMap config() const override;
  size_t state_dim() const { return cfg_.bidirectional ? 2 * cfg_.dim : cfg_.dim; }

  // Final hidden state of one direction; exposed so the BiLSTM construction
  // property (forward state + reversed-run state) can be tested directly.
  Tape::Var direction_state(Tape& tape, const EncodedInput& input, bool backward);

 private:
  struct GateParams {
    Parameter wx, wh, b;
  };
  struct Direction {
    GateParams input, forget, output, cell;
  };
  Direction make_direction(const std::string& prefix, Rng& rng);
  void register_direction(Direction& d);

  LstmConfig cfg_;
  std::vector<Direction> directions_;  // 1 or 2 (forward, backward)
  Parameter fc_w_, fc_b_, out_w_, out_b_;
};

struct TransformerConfig {
  size_t layers = 2;
  size_t hidden = 64;
  size_t heads = 4;
  size_t ff_dim = 256;  // 4 * hidden
  size_t max_len = 64;
  size_t classes = 3;
  double dropout = 0.1;
};

class TransformerModel final : public Classifier {
 public:
  TransformerModel(const TransformerConfig& cfg, Vocab vocab, uint64_t seed);
  Tape::Var build_probs(Tape& tape, const EncodedInput& input, Rng* dropout) override;
  ConfigMap config() const override;
  const Vocab* vocab() const override { return &vocab_; }
  const TransformerConfig& transformer_config() const { return cfg_; }

  // Attention probabilities recorded by the most recent forward, indexed
  // [layer][head], each max_len x max_len.
  const std::vector<std::vector<Tensor>>& last_attention() const {
    return last_attention_;
  }

 private:
  struct Head {
    Parameter wq, bq, wk, bk, wv, bv;
  };
  struct Layer {
    std::vector<Head> heads;
    Parameter wo, bo, ln1_g, ln1_b, w1, b1, w2, b2, ln2_g, ln2_b;
  };

  TransformerConfig cfg_;
  Vocab vocab_;
  Parameter tok_table_, seg_table_, pos_table_, ln_emb_g_, ln_emb_b_;
  std::vector<Layer> layers_;
  Parameter cls_w_, cls_b_;  // K x H classification matrix, 1 x K bias
  std::vector<std::vector<Tensor>> last_attention_;
};

// Checkpoint: single self-describing JSON file (versioned header, numeric
// width, config, vocabulary, parameters).
void save_checkpoint(Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_checkpoint(const std::string& path);

std::unique_ptr<Classifier> make_classifier(Family family, const ConfigMap& config,
                                            const Vocab* vocab, uint64_t seed);

}  // namespace sentipipe::models
