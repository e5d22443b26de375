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

#include "ctrnli/models.hpp"
#include "ctrnli/rouge.hpp"
#include "json.hpp"
#include "torch_common.hpp"

namespace ctrnli {
namespace {

struct Seq2SeqArch {
  std::string name;
  int64_t d_model;
  int64_t heads;
  int64_t encoder_layers;
  int64_t decoder_layers;
  int64_t feedforward;
  double dropout;
};

Seq2SeqArch seq2seq_arch(const std::string& size) {
  if (size == "tiny") return {"t5-tiny", 64, 4, 2, 2, 128, 0.1};
  if (size == "small") return {"t5-small", 128, 4, 3, 3, 256, 0.1};
  throw Error(ErrorCode::InvalidConfig, "unknown seq2seq size '" + size + "'");
}

constexpr int64_t kMaxPositions = 4096;

struct Seq2SeqNetImpl : torch::nn::Module {
  Seq2SeqNetImpl(int64_t vocab, const Seq2SeqArch& arch)
      : d_model(arch.d_model),
        embed(register_module("embed", torch::nn::Embedding(vocab, arch.d_model))),
        encoder(register_module(
            "encoder",
            torch::nn::TransformerEncoder(
                torch::nn::TransformerEncoderOptions(
                    torch::nn::TransformerEncoderLayerOptions(arch.d_model, arch.heads)
                        .dim_feedforward(arch.feedforward)
                        .dropout(arch.dropout),
                    arch.encoder_layers)))),
        decoder(register_module(
            "decoder",
            torch::nn::TransformerDecoder(
                torch::nn::TransformerDecoderOptions(
                    torch::nn::TransformerDecoderLayerOptions(arch.d_model, arch.heads)
                        .dim_feedforward(arch.feedforward)
                        .dropout(arch.dropout),
                    arch.decoder_layers)))),
        project(register_module("project", torch::nn::Linear(arch.d_model, vocab))) {
    torch::nn::init::normal_(embed->weight, 0.0, 1.0 / std::sqrt(static_cast<double>(d_model)));
    positions = register_buffer("positions", models::sinusoidal_positions(kMaxPositions, d_model));
  }

  // ids: [T, N] -> [T, N, d]
  torch::Tensor embed_ids(const torch::Tensor& ids) {
    const int64_t length = ids.size(0);
    auto x = embed(ids) * std::sqrt(static_cast<double>(d_model));
    return x + positions.slice(0, 0, length).unsqueeze(1);
  }

  torch::Tensor encode(const torch::Tensor& src, const torch::Tensor& src_pad) {
    return encoder(embed_ids(src), torch::Tensor(), src_pad);
  }

  torch::Tensor decode(const torch::Tensor& tgt, const torch::Tensor& memory,
                       const torch::Tensor& tgt_pad, const torch::Tensor& src_pad) {
    auto causal = torch::nn::TransformerImpl::generate_square_subsequent_mask(tgt.size(0));
    auto hidden = decoder(embed_ids(tgt), memory, causal, torch::Tensor(), tgt_pad, src_pad);
    return project(hidden);
  }

  int64_t d_model;
  torch::nn::Embedding embed;
  torch::nn::TransformerEncoder encoder;
  torch::nn::TransformerDecoder decoder;
  torch::nn::Linear project;
  torch::Tensor positions;
};
TORCH_MODULE(Seq2SeqNet);

struct Hypothesis {
  std::vector<int64_t> ids;  // starts with [BOS]
  double log_prob = 0.0;
  bool finished = false;
};

}  // namespace

struct Seq2SeqSummarizer::Impl {
  SummarizerConfig config;
  std::shared_ptr<const WordPieceTokenizer> tokenizer;
  Seq2SeqArch arch;
  Seq2SeqNet net{nullptr};

  std::vector<int64_t> source_ids(std::string_view source) const {
    std::vector<int64_t> ids;
    for (int id : tokenizer->ids(source)) {
      if (ids.size() + 1 >= config.max_source_tokens) break;
      ids.push_back(id);
    }
    ids.push_back(WordPieceTokenizer::kEos);
    return ids;
  }

  std::vector<int> beam_search(std::string_view source) {
    torch::NoGradGuard no_grad;
    net->eval();
    auto src = torch::tensor(source_ids(source), torch::kLong).unsqueeze(1);
    auto src_pad = torch::zeros({1, src.size(0)}, torch::kBool);
    auto memory = net->encode(src, src_pad);

    const std::size_t width = config.beam_width;
    const std::size_t max_len = config.max_summary_tokens;
    const int64_t vocab = static_cast<int64_t>(tokenizer->vocab_size());
    auto banned = torch::zeros({vocab}, torch::kBool);
    for (int id : {WordPieceTokenizer::kPad, WordPieceTokenizer::kUnk, WordPieceTokenizer::kCls,
                   WordPieceTokenizer::kSep, WordPieceTokenizer::kBos}) {
      banned[id] = true;
    }

    std::vector<Hypothesis> live = {{{WordPieceTokenizer::kBos}, 0.0, false}};
    std::vector<Hypothesis> done;
    for (std::size_t step = 0; step < max_len && !live.empty() && done.size() < width; ++step) {
      std::vector<std::vector<int64_t>> rows;
      for (const auto& h : live) rows.push_back(h.ids);
      auto tgt = models::pad_sequences(rows, WordPieceTokenizer::kPad);
      const int64_t batch = tgt.size(1);
      auto mem = memory.expand({memory.size(0), batch, memory.size(2)});
      auto logits = net->decode(tgt, mem, torch::zeros({batch, tgt.size(0)}, torch::kBool),
                                src_pad.expand({batch, src_pad.size(1)}));
      auto last = logits[tgt.size(0) - 1].masked_fill(banned, -1e9);
      // The final step may only close the hypothesis.
      if (step + 1 == max_len) {
        auto only_eos = torch::ones({vocab}, torch::kBool);
        only_eos[WordPieceTokenizer::kEos] = false;
        last = last.masked_fill(only_eos, -1e9);
      }
      auto log_probs = torch::log_softmax(last, -1).contiguous();
      auto top = log_probs.topk(static_cast<int64_t>(width), -1);
      auto values = std::get<0>(top).contiguous();
      auto indices = std::get<1>(top).contiguous();

      struct Candidate {
        double score;
        std::size_t beam;
        int64_t token;
      };
      std::vector<Candidate> candidates;
      auto v = values.accessor<float, 2>();
      auto ix = indices.accessor<int64_t, 2>();
      for (int64_t b = 0; b < batch; ++b) {
        for (int64_t k = 0; k < values.size(1); ++k) {
          candidates.push_back({live[static_cast<std::size_t>(b)].log_prob + v[b][k],
                                static_cast<std::size_t>(b), ix[b][k]});
        }
      }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

      std::vector<Hypothesis> next;
      for (const auto& c : candidates) {
        if (next.size() + done.size() >= width) break;
        Hypothesis h = live[c.beam];
        h.log_prob = c.score;
        if (c.token == WordPieceTokenizer::kEos) {
          h.finished = true;
          done.push_back(std::move(h));
        } else {
          h.ids.push_back(c.token);
          next.push_back(std::move(h));
        }
      }
      live = std::move(next);
    }
    for (auto& h : live) done.push_back(std::move(h));

    // Length-normalized log probability; the EOS step counts for finished ones.
    auto normalized = [](const Hypothesis& h) {
      const double steps = static_cast<double>(h.ids.size() - 1 + (h.finished ? 1 : 0));
      return steps > 0 ? h.log_prob / steps : h.log_prob;
    };
    const Hypothesis* best = &done.front();
    for (const auto& h : done) {
      if (normalized(h) > normalized(*best)) best = &h;
    }
    return std::vector<int>(best->ids.begin() + 1, best->ids.end());
  }
};

struct SummarizerTraining {
  static Seq2SeqSummarizer::Impl& impl(Seq2SeqSummarizer& model) { return *model.impl_; }
};

bool model_runtime_available() { return true; }

Seq2SeqSummarizer::Seq2SeqSummarizer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Seq2SeqSummarizer::Seq2SeqSummarizer(Seq2SeqSummarizer&&) noexcept = default;
Seq2SeqSummarizer& Seq2SeqSummarizer::operator=(Seq2SeqSummarizer&&) noexcept = default;
Seq2SeqSummarizer::~Seq2SeqSummarizer() = default;

Seq2SeqSummarizer Seq2SeqSummarizer::open(const SummarizerConfig& config,
                                          std::shared_ptr<const WordPieceTokenizer> tokenizer,
                                          std::uint64_t seed) {
  config.validate();
  auto impl = std::make_unique<Impl>();
  impl->config = config;
  if (config.max_source_tokens > static_cast<std::size_t>(kMaxPositions) ||
      config.max_summary_tokens + 1 > static_cast<std::size_t>(kMaxPositions)) {
    throw Error(ErrorCode::InvalidConfig, "sequence limits exceed the position table");
  }

  const std::string size = models::scratch_size(config.model_identifier, "t5");
  if (!size.empty()) {
    if (!tokenizer) throw Error(ErrorCode::InvalidConfig, "scratch summarizer needs a tokenizer");
    impl->tokenizer = std::move(tokenizer);
    impl->arch = seq2seq_arch(size);
    torch::manual_seed(seed);
    impl->net = Seq2SeqNet(static_cast<int64_t>(impl->tokenizer->vocab_size()), impl->arch);
    return Seq2SeqSummarizer(std::move(impl));
  }

  const std::filesystem::path dir(config.model_identifier);
  if (!std::filesystem::exists(dir / "model.pt")) {
    throw Error(ErrorCode::MissingCheckpoint,
                "'" + config.model_identifier + "' is neither a scratch spec nor a checkpoint");
  }
  std::ifstream meta_in(dir / "config.json");
  if (!meta_in) throw Error(ErrorCode::MissingCheckpoint, "no config.json in " + dir.string());
  const auto meta = nlohmann::json::parse(meta_in);
  impl->arch = seq2seq_arch(meta.at("size").get<std::string>());
  impl->tokenizer =
      std::make_shared<const WordPieceTokenizer>(WordPieceTokenizer::load(dir / "vocab.txt"));
  impl->net = Seq2SeqNet(static_cast<int64_t>(impl->tokenizer->vocab_size()), impl->arch);
  torch::load(impl->net, (dir / "model.pt").string());
  return Seq2SeqSummarizer(std::move(impl));
}

std::string Seq2SeqSummarizer::summarize(std::string_view premise) {
  return generate_from_source(impl_->config.prompt_prefix + std::string(premise));
}

std::string Seq2SeqSummarizer::generate_from_source(std::string_view source) {
  const std::vector<int> ids = generate_ids(source);
  return impl_->tokenizer->decode(ids);
}

std::vector<int> Seq2SeqSummarizer::generate_ids(std::string_view source) {
  return impl_->beam_search(source);
}

std::string Seq2SeqSummarizer::fingerprint() const {
  const auto& c = impl_->config;
  return "seq2seq-" + impl_->arch.name + "-" + models::weights_digest(*impl_->net) +
         "/src=" + std::to_string(c.max_source_tokens) + "/sum=" +
         std::to_string(c.max_summary_tokens) + "/beam=" + std::to_string(c.beam_width) +
         "/prefix-" + short_hash(c.prompt_prefix, 8);
}

const SummarizerConfig& Seq2SeqSummarizer::config() const { return impl_->config; }
const WordPieceTokenizer& Seq2SeqSummarizer::tokenizer() const { return *impl_->tokenizer; }

void Seq2SeqSummarizer::save(const std::filesystem::path& directory) const {
  std::filesystem::create_directories(directory);
  torch::save(impl_->net, (directory / "model.pt").string());
  impl_->tokenizer->save(directory / "vocab.txt");
  nlohmann::ordered_json meta;
  meta["family"] = "t5";
  meta["size"] = impl_->arch.name.substr(3);
  meta["fingerprint"] = fingerprint();
  std::ofstream out(directory / "config.json", std::ios::trunc);
  out << meta.dump(2) << '\n';
}

double mean_rouge1(Seq2SeqSummarizer& model, std::span<const SummaryTrainPair> pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& pair : pairs) {
    total += rouge1(model.generate_from_source(pair.source), pair.target).f1;
  }
  return total / static_cast<double>(pairs.size());
}

SummarizerTrainResult finetune_summarizer(Seq2SeqSummarizer& model, const FineTuneConfig& config,
                                          std::span<const SummaryTrainPair> pairs,
                                          std::span<const SummaryTrainPair> dev_pairs,
                                          const std::filesystem::path& checkpoint_root) {
  config.validate();
  if (pairs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no summarizer training pairs");
  auto& impl = SummarizerTraining::impl(model);
  auto& net = impl.net;
  const auto& tokenizer = *impl.tokenizer;

  std::vector<std::size_t> grid = config.epochs;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t last_epoch = grid.back();

  // Pre-tokenize once.
  std::vector<std::vector<int64_t>> sources;
  std::vector<std::vector<int64_t>> targets;
  for (const auto& pair : pairs) {
    sources.push_back(impl.source_ids(pair.source));
    std::vector<int64_t> target;
    for (int id : tokenizer.ids(pair.target)) {
      if (target.size() + 1 >= impl.config.max_summary_tokens) break;
      target.push_back(id);
    }
    targets.push_back(std::move(target));
  }

  torch::manual_seed(config.seed);
  torch::optim::AdamW optimizer(
      net->parameters(),
      torch::optim::AdamWOptions(config.learning_rate).weight_decay(config.weight_decay));

  SummarizerTrainResult result;
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 1; epoch <= last_epoch; ++epoch) {
    net->train();
    std::mt19937_64 rng(config.seed * 1000003ULL + epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      std::vector<std::vector<int64_t>> src_rows;
      std::vector<std::vector<int64_t>> in_rows;
      std::vector<std::vector<int64_t>> out_rows;
      for (std::size_t i = start; i < stop; ++i) {
        const std::size_t k = order[i];
        src_rows.push_back(sources[k]);
        std::vector<int64_t> in = {WordPieceTokenizer::kBos};
        in.insert(in.end(), targets[k].begin(), targets[k].end());
        std::vector<int64_t> out(targets[k].begin(), targets[k].end());
        out.push_back(WordPieceTokenizer::kEos);
        in_rows.push_back(std::move(in));
        out_rows.push_back(std::move(out));
      }
      auto src = models::pad_sequences(src_rows, WordPieceTokenizer::kPad);
      auto tgt_in = models::pad_sequences(in_rows, WordPieceTokenizer::kPad);
      auto tgt_out = models::pad_sequences(out_rows, WordPieceTokenizer::kPad);
      auto src_pad = src.eq(WordPieceTokenizer::kPad).transpose(0, 1);
      auto tgt_pad = tgt_in.eq(WordPieceTokenizer::kPad).transpose(0, 1);

      auto memory = net->encode(src, src_pad);
      auto logits = net->decode(tgt_in, memory, tgt_pad, src_pad);
      auto loss = torch::nn::functional::cross_entropy(
          logits.reshape({-1, logits.size(2)}), tgt_out.reshape({-1}),
          torch::nn::functional::CrossEntropyFuncOptions().ignore_index(WordPieceTokenizer::kPad));
      optimizer.zero_grad();
      loss.backward();
      torch::nn::utils::clip_grad_norm_(net->parameters(), 1.0);
      optimizer.step();
      epoch_loss += loss.item<double>();
      ++batches;
    }
    log::debug("summarizer epoch " + std::to_string(epoch) + ": loss " +
               models::fixed4(epoch_loss / static_cast<double>(batches)));

    if (std::binary_search(grid.begin(), grid.end(), epoch)) {
      const auto& scored = dev_pairs.empty() ? pairs : dev_pairs;
      CheckpointScore score{epoch, mean_rouge1(model, scored)};
      log::info("summarizer epoch " + std::to_string(epoch) + ": dev ROUGE-1 F1 " +
                models::fixed4(score.rouge1_f));
      result.scores.push_back(score);
      if (!checkpoint_root.empty()) {
        const auto dir = checkpoint_root / ("epoch-" + std::to_string(epoch));
        model.save(dir);
        result.checkpoints.push_back(dir);
      }
    }
  }
  result.best = best_checkpoint(result.scores);
  return result;
}

}  // namespace ctrnli
