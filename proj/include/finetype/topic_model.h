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

#ifndef FINETYPE_TOPIC_MODEL_H_
#define FINETYPE_TOPIC_MODEL_H_

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "finetype/corpus.h"

namespace finetype {

// Multinomial naive Bayes over bags of words with add-one smoothing, over
// the fixed eight-topic inventory.
class TopicModel {
 public:
  struct Example {
    std::vector<std::string> words;
    std::string topic;
  };

  // Throws Error for a topic outside kTopics.
  static TopicModel Train(const std::vector<Example> &examples);

  // Most probable topic; ties go to the earlier topic in kTopics.
  std::string Predict(const std::vector<std::string> &words) const;
  std::string Predict(const Document &doc) const;
  // Unnormalized log posterior per topic.
  std::array<double, 8> Score(const std::vector<std::string> &words) const;

  bool trained() const { return trained_; }

  void Write(std::ostream &out) const;
  static TopicModel Read(std::istream &in);

 private:
  bool trained_ = false;
  std::array<double, 8> log_prior_{};
  std::unordered_map<std::string, std::array<double, 8>> log_likelihood_;
};

// Lowercased tokens of all sentences.
std::vector<std::string> DocumentWords(const Document &doc);

// Reads "document-id<TAB>topic" lines. Unknown topics throw.
std::map<std::string, std::string> LoadTopicLabels(std::istream &in);

// The record's topic when present, else the model's prediction, else "".
std::string ResolveTopic(const Document &doc, const TopicModel *model);

}  // namespace finetype

#endif  // FINETYPE_TOPIC_MODEL_H_
