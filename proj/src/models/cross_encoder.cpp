// Copyright 2026 The ctrnli Authors.
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

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "ctrnli/log.hpp"

#include "ctrnli/metrics.hpp"
#include "ctrnli/models.hpp"
#include "json.hpp"
#include "torch_common.hpp"

namespace ctrnli {
namespace {

struct EncoderArch {
  std::string size;
  int64_t d_model;
  int64_t heads;
  int64_t layers;
  int64_t feedforward;
  double dropout;
};

EncoderArch encoder_arch(const std::string& size) {
  if (size == "tiny") return {"tiny", 64, 4, 1, 128, 0.1};
  if (size == "small") return {"small", 128, 4, 2, 256, 0.1};
  if (size == "base") return {"base", 256, 8, 4, 512, 0.1};
  throw Error(ErrorCode::InvalidConfig, "unknown encoder size '" + size + "'");
}

constexpr int64_t kMaxSequence = 512;

struct CrossEncoderNetImpl : torch::nn::Module {
  CrossEncoderNetImpl(int64_t vocab, const EncoderArch& arch)
      : tokens(register_module("tokens", torch::nn::Embedding(vocab, arch.d_model))),
        segments(register_module("segments", torch::nn::Embedding(2, arch.d_model))),
        positions(register_module("positions", torch::nn::Embedding(kMaxSequence, arch.d_model))),
        norm(register_module("norm", torch::nn::LayerNorm(
                                         torch::nn::LayerNormOptions({arch.d_model})))),
        encoder(register_module(
            "encoder",
            torch::nn::TransformerEncoder(torch::nn::TransformerEncoderOptions(
                torch::nn::TransformerEncoderLayerOptions(arch.d_model, arch.heads)
                    .dim_feedforward(arch.feedforward)
                    .dropout(arch.dropout),
                arch.layers)))),
        pooler(register_module("pooler", torch::nn::Linear(arch.d_model, arch.d_model))),
        head(register_module("head", torch::nn::Linear(arch.d_model, 2))) {
    // A zero head starts every pair at p = 0.5, so the first updates follow
    // the class-mean difference of the pooled features instead of fighting
    // a random initial decision boundary.
    torch::NoGradGuard no_grad;
    head->weight.zero_();
    head->bias.zero_();
  }

  // ids, segs: [T, N]; pad: [N, T] (true = padding). Returns logits [N, 2].
  torch::Tensor forward(const torch::Tensor& ids, const torch::Tensor& segs,
                        const torch::Tensor& pad) {
    auto pos = torch::arange(ids.size(0), torch::kLong).unsqueeze(1).expand_as(ids);
    auto x = norm(tokens(ids) + segments(segs) + positions(pos));
    auto hidden = encoder(x, torch::Tensor(), pad);
    auto cls = hidden[0];
    return head(torch::tanh(pooler(cls)));
  }

  torch::nn::Embedding tokens;
  torch::nn::Embedding segments;
  torch::nn::Embedding positions;
  torch::nn::LayerNorm norm;
  torch::nn::TransformerEncoder encoder;
  torch::nn::Linear pooler;
  torch::nn::Linear head;
};
TORCH_MODULE(CrossEncoderNet);

struct Encoded {
  std::vector<int64_t> ids;
  std::vector<int64_t> segments;
};

}  // namespace

struct CrossEncoder::Impl {
  ClassifierConfig config;
  std::shared_ptr<const WordPieceTokenizer> tokenizer;
  EncoderArch arch;
  CrossEncoderNet net{nullptr};

  // [CLS] a [SEP] b [SEP], premise side cut if the pair was not assembled
  // with this tokenizer's budget.
  Encoded encode(const NLIInputPair& pair) const {
    std::vector<int> a = tokenizer->ids(pair.text_a);
    const std::vector<int> b = tokenizer->ids(pair.text_b);
    const std::size_t limit = config.max_sequence_tokens;
    const std::size_t room = limit > b.size() + kSpecialTokensPerPair
                                 ? limit - b.size() - kSpecialTokensPerPair
                                 : 0;
    if (a.size() > room) a.resize(room);
    Encoded e;
    e.ids.push_back(WordPieceTokenizer::kCls);
    e.ids.insert(e.ids.end(), a.begin(), a.end());
    e.ids.push_back(WordPieceTokenizer::kSep);
    e.segments.assign(e.ids.size(), 0);
    for (int id : b) {
      if (e.ids.size() + 1 >= limit) break;
      e.ids.push_back(id);
    }
    e.ids.push_back(WordPieceTokenizer::kSep);
    e.segments.resize(e.ids.size(), 1);
    return e;
  }

  // Entailment probabilities for a batch.
  torch::Tensor forward(std::span<const Encoded> batch) {
    std::vector<std::vector<int64_t>> ids;
    std::vector<std::vector<int64_t>> segs;
    for (const auto& e : batch) {
      ids.push_back(e.ids);
      segs.push_back(e.segments);
    }
    auto id_tensor = models::pad_sequences(ids, WordPieceTokenizer::kPad);
    auto seg_tensor = models::pad_sequences(segs, 0);
    auto pad = id_tensor.eq(WordPieceTokenizer::kPad).transpose(0, 1);
    return net->forward(id_tensor, seg_tensor, pad);
  }

  std::vector<double> scores(std::span<const Encoded> encoded) {
    torch::NoGradGuard no_grad;
    std::vector<double> out;
    const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
    for (std::size_t start = 0; start < encoded.size(); start += batch) {
      const std::size_t stop = std::min(encoded.size(), start + batch);
      auto probs = torch::softmax(forward(encoded.subspan(start, stop - start)), -1)
                       .select(1, 1)
                       .contiguous()
                       .to(torch::kDouble);
      auto acc = probs.accessor<double, 1>();
      for (int64_t i = 0; i < probs.size(0); ++i) out.push_back(acc[i]);
    }
    return out;
  }
};

struct ClassifierTraining {
  static CrossEncoder::Impl& impl(CrossEncoder& model) { return *model.impl_; }
};

CrossEncoder::CrossEncoder(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
CrossEncoder::CrossEncoder(CrossEncoder&&) noexcept = default;
CrossEncoder& CrossEncoder::operator=(CrossEncoder&&) noexcept = default;
CrossEncoder::~CrossEncoder() = default;

CrossEncoder CrossEncoder::open(const ClassifierConfig& config,
                                std::shared_ptr<const WordPieceTokenizer> tokenizer) {
  config.validate();
  auto impl = std::make_unique<Impl>();
  impl->config = config;
  const std::string size = models::scratch_size(config.model_identifier, "encoder");
  if (!size.empty()) {
    if (!tokenizer) throw Error(ErrorCode::InvalidConfig, "scratch encoder needs a tokenizer");
    impl->tokenizer = std::move(tokenizer);
    impl->arch = encoder_arch(size);
    torch::manual_seed(config.seed);
    impl->net = CrossEncoderNet(static_cast<int64_t>(impl->tokenizer->vocab_size()), impl->arch);
    impl->net->eval();
    return CrossEncoder(std::move(impl));
  }

  const std::filesystem::path dir(config.model_identifier);
  if (!std::filesystem::exists(dir / "model.pt")) {
    throw Error(ErrorCode::MissingCheckpoint,
                "'" + config.model_identifier + "' is neither a scratch spec nor a checkpoint");
  }
  std::ifstream meta_in(dir / "config.json");
  if (!meta_in) throw Error(ErrorCode::MissingCheckpoint, "no config.json in " + dir.string());
  const auto meta = nlohmann::json::parse(meta_in);
  impl->arch = encoder_arch(meta.at("size").get<std::string>());
  impl->tokenizer =
      std::make_shared<const WordPieceTokenizer>(WordPieceTokenizer::load(dir / "vocab.txt"));
  impl->net = CrossEncoderNet(static_cast<int64_t>(impl->tokenizer->vocab_size()), impl->arch);
  torch::load(impl->net, (dir / "model.pt").string());
  impl->net->eval();
  return CrossEncoder(std::move(impl));
}

std::vector<PredictionRecord> CrossEncoder::predict(std::span<const NLIInputPair> pairs,
                                                    const std::string& model_tag) const {
  std::vector<Encoded> encoded;
  encoded.reserve(pairs.size());
  for (const auto& pair : pairs) encoded.push_back(impl_->encode(pair));
  const std::vector<double> probs = impl_->scores(encoded);
  std::vector<PredictionRecord> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({pairs[i].instance_id, label_for_score(probs[i]), probs[i], model_tag});
  }
  return out;
}

std::string CrossEncoder::fingerprint() const {
  return "cross-encoder-" + impl_->arch.size + "-" + models::weights_digest(*impl_->net);
}

const WordPieceTokenizer& CrossEncoder::tokenizer() const { return *impl_->tokenizer; }

void CrossEncoder::save(const std::filesystem::path& directory) const {
  std::filesystem::create_directories(directory);
  torch::save(impl_->net, (directory / "model.pt").string());
  impl_->tokenizer->save(directory / "vocab.txt");
  nlohmann::ordered_json meta;
  meta["family"] = "encoder";
  meta["size"] = impl_->arch.size;
  meta["fingerprint"] = fingerprint();
  std::ofstream out(directory / "config.json", std::ios::trunc);
  out << meta.dump(2) << '\n';
}

ClassifierTrainResult finetune_classifier(CrossEncoder& model, const ClassifierConfig& config,
                                          std::span<const NLIInputPair> train_pairs,
                                          std::span<const NLIInputPair> dev_pairs) {
  config.validate();
  if (train_pairs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no classifier training pairs");
  auto& impl = ClassifierTraining::impl(model);
  auto& net = impl.net;

  auto encode_all = [&](std::span<const NLIInputPair> pairs, std::vector<Encoded>& encoded,
                        std::vector<Label>& golds) {
    for (const auto& pair : pairs) {
      if (!pair.gold) {
        throw Error(ErrorCode::UnlabeledInstance, "training pair " + pair.instance_id + " has no label");
      }
      encoded.push_back(impl.encode(pair));
      golds.push_back(*pair.gold);
    }
  };
  std::vector<Encoded> train;
  std::vector<Label> train_gold;
  encode_all(train_pairs, train, train_gold);
  std::vector<Encoded> dev;
  std::vector<Label> dev_gold;
  encode_all(dev_pairs.empty() ? train_pairs : dev_pairs, dev, dev_gold);

  auto predicted_labels = [&](std::span<const Encoded> encoded) {
    net->eval();
    std::vector<Label> out;
    for (double p : impl.scores(encoded)) out.push_back(label_for_score(p));
    return out;
  };

  torch::manual_seed(config.seed);
  torch::optim::Adam optimizer(net->parameters(), torch::optim::AdamOptions(config.learning_rate));

  ClassifierTrainResult result;
  double best_f1 = -1.0;
  std::vector<torch::Tensor> best_state;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    net->train();
    std::mt19937_64 rng(config.seed * 1000003ULL + epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      std::vector<Encoded> batch;
      std::vector<int64_t> labels;
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(train[order[i]]);
        labels.push_back(label_value(train_gold[order[i]]));
      }
      auto logits = impl.forward(batch);
      auto loss = torch::nn::functional::cross_entropy(logits, torch::tensor(labels, torch::kLong));
      optimizer.zero_grad();
      loss.backward();
      optimizer.step();
    }

    const auto train_pred = predicted_labels(train);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < train_pred.size(); ++i) correct += train_pred[i] == train_gold[i];
    result.train_accuracy.push_back(static_cast<double>(correct) /
                                    static_cast<double>(train_pred.size()));
    const double f1 = macro_f1(dev_gold, predicted_labels(dev)).macro_f1;
    result.dev_macro_f1.push_back(f1);
    log::debug("classifier epoch " + std::to_string(epoch) + ": train acc " +
               models::fixed4(result.train_accuracy.back()) + ", dev macro F1 " + models::fixed4(f1));
    if (f1 > best_f1) {
      best_f1 = f1;
      result.best_epoch = epoch;
      best_state.clear();
      for (const auto& p : net->parameters()) best_state.push_back(p.detach().clone());
    }
  }

  torch::NoGradGuard no_grad;
  auto params = net->parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i].copy_(best_state[i]);
  net->eval();
  return result;
}

}  // namespace ctrnli
