// Copyright 2026 The Finetype Authors.
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

#include "finetype/topic_model.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "finetype/error.h"
#include "finetype/format.h"

namespace finetype {

namespace {

int TopicIndex(std::string_view topic) {
  for (size_t i = 0; i < kTopics.size(); ++i) {
    if (kTopics[i] == topic) return static_cast<int>(i);
  }
  throw Error("unknown topic '" + std::string(topic) + "'");
}

}  // namespace

TopicModel TopicModel::Train(const std::vector<Example> &examples) {
  std::array<double, 8> doc_counts{};
  std::array<double, 8> token_totals{};
  std::unordered_map<std::string, std::array<double, 8>> counts;
  for (const Example &ex : examples) {
    const int t = TopicIndex(ex.topic);
    doc_counts[t] += 1;
    for (const std::string &w : ex.words) {
      counts[w][t] += 1;
      token_totals[t] += 1;
    }
  }

  TopicModel model;
  model.trained_ = true;
  const double vocab = static_cast<double>(counts.size());
  const double n = static_cast<double>(examples.size());
  for (int t = 0; t < 8; ++t) {
    model.log_prior_[t] = std::log((doc_counts[t] + 1.0) / (n + 8.0));
  }
  for (const auto &[word, c] : counts) {
    std::array<double, 8> &ll = model.log_likelihood_[word];
    for (int t = 0; t < 8; ++t) {
      ll[t] = std::log((c[t] + 1.0) / (token_totals[t] + vocab));
    }
  }
  return model;
}

std::array<double, 8> TopicModel::Score(
    const std::vector<std::string> &words) const {
  std::array<double, 8> score = log_prior_;
  for (const std::string &w : words) {
    auto it = log_likelihood_.find(w);
    // Words outside the training vocabulary carry no evidence.
    if (it == log_likelihood_.end()) continue;
    for (int t = 0; t < 8; ++t) score[t] += it->second[t];
  }
  return score;
}

std::string TopicModel::Predict(const std::vector<std::string> &words) const {
  if (!trained_) throw Error("topic model is not trained");
  std::array<double, 8> score = Score(words);
  int best = 0;
  for (int t = 1; t < 8; ++t) {
    if (score[t] > score[best]) best = t;
  }
  return std::string(kTopics[best]);
}

std::string TopicModel::Predict(const Document &doc) const {
  return Predict(DocumentWords(doc));
}

void TopicModel::Write(std::ostream &out) const {
  out << "topic-model " << log_likelihood_.size() << '\n';
  out << "prior";
  for (double v : log_prior_) out << ' ' << FormatDouble(v);
  out << '\n';
  // Sorted for byte-stable output.
  std::vector<const std::string *> words;
  for (const auto &entry : log_likelihood_) words.push_back(&entry.first);
  std::sort(words.begin(), words.end(),
            [](const std::string *a, const std::string *b) { return *a < *b; });
  for (const std::string *w : words) {
    out << EscapeField(*w);
    for (double v : log_likelihood_.at(*w)) out << ' ' << FormatDouble(v);
    out << '\n';
  }
}

TopicModel TopicModel::Read(std::istream &in) {
  TopicModel model;
  std::string line;
  auto next = [&]() {
    if (!std::getline(in, line)) throw Error("truncated topic model");
    return SplitFields(line);
  };
  std::vector<std::string> header = next();
  if (header.size() != 2 || header[0] != "topic-model") {
    throw Error("malformed topic model header");
  }
  const long words = ParseLong(header[1]);
  auto read_row = [&](const std::vector<std::string> &fields,
                      std::array<double, 8> &row) {
    if (fields.size() != 9) throw Error("malformed topic model row");
    for (int t = 0; t < 8; ++t) row[t] = ParseDouble(fields[t + 1]);
  };
  std::vector<std::string> prior = next();
  if (prior.empty() || prior[0] != "prior") throw Error("missing topic prior");
  read_row(prior, model.log_prior_);
  for (long i = 0; i < words; ++i) {
    std::vector<std::string> fields = next();
    if (fields.empty()) throw Error("malformed topic model row");
    read_row(fields, model.log_likelihood_[UnescapeField(fields[0])]);
  }
  model.trained_ = true;
  return model;
}

std::vector<std::string> DocumentWords(const Document &doc) {
  std::vector<std::string> words;
  for (const Sentence &s : doc.sentences) {
    for (const Token &t : s) {
      std::string w = t.text;
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      words.push_back(std::move(w));
    }
  }
  return words;
}

std::map<std::string, std::string> LoadTopicLabels(std::istream &in) {
  std::map<std::string, std::string> labels;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected 'document<TAB>topic'", line_number);
    }
    std::string topic = line.substr(tab + 1);
    if (!IsKnownTopic(topic)) {
      throw ParseError("unknown topic '" + topic + "'", line_number);
    }
    labels[line.substr(0, tab)] = topic;
  }
  return labels;
}

std::string ResolveTopic(const Document &doc, const TopicModel *model) {
  if (doc.topic) return *doc.topic;
  if (model != nullptr && model->trained()) return model->Predict(doc);
  return "";
}

}  // namespace finetype
