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

#include "finetype/model_io.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "finetype/error.h"
#include "finetype/format.h"

namespace finetype {

namespace {

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void WriteSparseRow(std::ostream &out, const double *row, int n) {
  for (int j = 0; j < n; ++j) {
    if (row[j] != 0.0) out << j << ' ' << FormatDouble(row[j]) << '\n';
  }
}

int CountNonZero(const double *row, int n) {
  int nnz = 0;
  for (int j = 0; j < n; ++j) nnz += row[j] != 0.0;
  return nnz;
}

class LineReader {
 public:
  explicit LineReader(std::istream &in) : in_(in) {}

  std::vector<std::string> Next() {
    if (!std::getline(in_, line_)) throw Error("truncated model file");
    ++number_;
    return SplitFields(line_);
  }

  // Next line, which must start with `keyword` and have `arity` fields in
  // total.
  std::vector<std::string> Expect(std::string_view keyword, size_t arity) {
    std::vector<std::string> f = Next();
    if (f.empty() || f[0] != keyword || (arity > 0 && f.size() != arity)) {
      throw Error("model file line " + std::to_string(number_) +
                  ": expected '" + std::string(keyword) + "'");
    }
    return f;
  }

  std::istream &stream() { return in_; }

 private:
  std::istream &in_;
  std::string line_;
  int number_ = 0;
};

void ReadSparseRow(LineReader &reader, long nnz, double *row, int n) {
  for (long i = 0; i < nnz; ++i) {
    std::vector<std::string> f = reader.Next();
    if (f.size() != 2) throw Error("malformed weight line");
    const long j = ParseLong(f[0]);
    if (j < 0 || j >= n) throw Error("weight index out of range");
    row[j] = ParseDouble(f[1]);
  }
}

std::string JoinIds(const std::vector<LabelId> &ids) {
  std::string out;
  for (LabelId id : ids) {
    if (!out.empty()) out += ',';
    out += std::to_string(id);
  }
  return out.empty() ? "-" : out;
}

std::vector<LabelId> SplitIds(const std::string &text) {
  std::vector<LabelId> out;
  if (text == "-") return out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(static_cast<LabelId>(
        ParseLong(std::string_view(text).substr(start, comma - start))));
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLocal: return "local";
    case ModelKind::kFlat: return "flat";
    case ModelKind::kCoarse: return "coarse";
  }
  return "?";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "local") return ModelKind::kLocal;
  if (name == "flat") return ModelKind::kFlat;
  if (name == "coarse") return ModelKind::kCoarse;
  throw Error("unknown model kind '" + std::string(name) + "'");
}

void WriteModel(std::ostream &out, const ModelFile &model) {
  const int d = model.dictionary.size();
  const int k = static_cast<int>(model.classes.size());
  out << "finetype-model " << kModelFormatVersion << '\n';
  out << "kind " << ModelKindName(model.kind) << '\n';
  out << "taxonomy " << Hex64(model.taxonomy_fingerprint) << '\n';
  std::map<std::string, std::string> meta = model.metadata;
  if (model.kind == ModelKind::kLocal) {
    meta["negatives"] = NegativeStrategyName(model.local.strategy);
    meta["l2"] = FormatDouble(model.local.l2);
    meta["degenerate"] = JoinIds(model.local.degenerate);
    meta["fallback"] = JoinIds(model.local.fallback);
  }
  for (const auto &[key, value] : meta) {
    out << "meta " << EscapeField(key) << ' ' << EscapeField(value) << '\n';
  }
  out << "dictionary " << d << '\n';
  for (const std::string &name : model.dictionary.names()) {
    out << EscapeField(name) << '\n';
  }
  out << "classes " << k << '\n';
  for (const std::string &name : model.classes) out << EscapeField(name) << '\n';

  if (model.kind == ModelKind::kLocal) {
    if (static_cast<int>(model.local.models.size()) != k) {
      throw Error("local model count does not match class count");
    }
    for (int c = 0; c < k; ++c) {
      const BinaryModel &m = model.local.models[c];
      const double *row = m.weights.data();
      const int n = static_cast<int>(m.weights.size());
      out << "binary " << c << ' ' << FormatDouble(m.bias) << ' '
          << CountNonZero(row, n) << '\n';
      WriteSparseRow(out, row, n);
    }
  } else {
    const SoftmaxModel &s = model.softmax;
    if (s.num_classes != k || s.num_features != d) {
      throw Error("softmax shape does not match classes and dictionary");
    }
    out << "softmax " << k << ' ' << d << '\n';
    out << "bias";
    for (double b : s.biases) out << ' ' << FormatDouble(b);
    out << '\n';
    for (int c = 0; c < k; ++c) {
      const double *row = s.weights.data() + static_cast<size_t>(c) * d;
      out << "row " << c << ' ' << CountNonZero(row, d) << '\n';
      WriteSparseRow(out, row, d);
    }
  }
  if (model.topic_model) model.topic_model->Write(out);
  out << "end\n";
}

void WriteModelFile(const std::string &filename, const ModelFile &model) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + filename + "'");
  WriteModel(out, model);
  if (!out) throw Error("error writing model file '" + filename + "'");
}

ModelFile ReadModel(std::istream &in, const Taxonomy *tax) {
  LineReader reader(in);
  std::vector<std::string> header = reader.Expect("finetype-model", 2);
  if (ParseLong(header[1]) != kModelFormatVersion) {
    throw Error("unsupported model format version " + header[1]);
  }
  ModelFile model;
  model.kind = ParseModelKind(reader.Expect("kind", 2)[1]);
  const std::string hash = reader.Expect("taxonomy", 2)[1];
  model.taxonomy_fingerprint = std::stoull(hash, nullptr, 16);
  if (model.kind == ModelKind::kCoarse) {
    if (model.taxonomy_fingerprint != CoarseFingerprint()) {
      throw Error("coarse model has an unexpected class fingerprint");
    }
  } else if (tax != nullptr &&
             model.taxonomy_fingerprint != tax->Fingerprint()) {
    throw Error("taxonomy hash mismatch: model was trained with " + hash +
                ", taxonomy is " + Hex64(tax->Fingerprint()));
  }

  std::vector<std::string> f = reader.Next();
  while (!f.empty() && f[0] == "meta") {
    if (f.size() != 3) throw Error("malformed meta line");
    model.metadata[UnescapeField(f[1])] = UnescapeField(f[2]);
    f = reader.Next();
  }
  if (f.size() != 2 || f[0] != "dictionary") {
    throw Error("model file: expected 'dictionary'");
  }
  const long d = ParseLong(f[1]);
  for (long i = 0; i < d; ++i) {
    std::vector<std::string> name = reader.Next();
    if (name.size() != 1) throw Error("malformed dictionary entry");
    model.dictionary.Add(UnescapeField(name[0]));
  }
  if (model.dictionary.size() != d) throw Error("duplicate dictionary entry");
  model.dictionary.Freeze();
  const long k = ParseLong(reader.Expect("classes", 2)[1]);
  for (long c = 0; c < k; ++c) {
    std::vector<std::string> name = reader.Next();
    if (name.size() != 1) throw Error("malformed class entry");
    model.classes.push_back(UnescapeField(name[0]));
  }
  if (tax != nullptr && model.kind != ModelKind::kCoarse &&
      k != tax->size()) {
    throw Error("model class count does not match taxonomy");
  }

  if (model.kind == ModelKind::kLocal) {
    model.local.num_features = static_cast<int>(d);
    model.local.strategy = ParseNegativeStrategy(model.metadata.at("negatives"));
    model.local.l2 = ParseDouble(model.metadata.at("l2"));
    model.local.degenerate = SplitIds(model.metadata.at("degenerate"));
    model.local.fallback = SplitIds(model.metadata.at("fallback"));
    for (const char *key : {"negatives", "l2", "degenerate", "fallback"}) {
      model.metadata.erase(key);
    }
    model.local.models.resize(k);
    for (long c = 0; c < k; ++c) {
      std::vector<std::string> row = reader.Expect("binary", 4);
      if (ParseLong(row[1]) != c) throw Error("binary models out of order");
      BinaryModel &m = model.local.models[c];
      m.bias = ParseDouble(row[2]);
      m.weights.assign(d, 0.0);
      ReadSparseRow(reader, ParseLong(row[3]), m.weights.data(),
                    static_cast<int>(d));
    }
  } else {
    std::vector<std::string> shape = reader.Expect("softmax", 3);
    if (ParseLong(shape[1]) != k || ParseLong(shape[2]) != d) {
      throw Error("softmax shape mismatch");
    }
    SoftmaxModel &s = model.softmax;
    s.num_classes = static_cast<int>(k);
    s.num_features = static_cast<int>(d);
    s.weights.assign(static_cast<size_t>(k) * d, 0.0);
    std::vector<std::string> bias = reader.Expect("bias", k + 1);
    for (long c = 0; c < k; ++c) s.biases.push_back(ParseDouble(bias[c + 1]));
    for (long c = 0; c < k; ++c) {
      std::vector<std::string> row = reader.Expect("row", 3);
      if (ParseLong(row[1]) != c) throw Error("softmax rows out of order");
      ReadSparseRow(reader, ParseLong(row[2]),
                    s.weights.data() + static_cast<size_t>(c) * d,
                    static_cast<int>(d));
    }
  }

  // Optional topic model, then the end marker.
  std::streampos mark = in.tellg();
  std::string line;
  if (!std::getline(in, line)) throw Error("truncated model file");
  if (line.rfind("topic-model ", 0) == 0) {
    in.seekg(mark);
    model.topic_model = TopicModel::Read(in);
    if (!std::getline(in, line)) throw Error("truncated model file");
  }
  if (line != "end") throw Error("model file: expected 'end'");
  return model;
}

ModelFile ReadModelFile(const std::string &filename, const Taxonomy *tax) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + filename + "'");
  return ReadModel(in, tax);
}

uint64_t CoarseFingerprint() {
  static const uint64_t fingerprint = Taxonomy::FromPaths(
      {std::string(kCoarseTypes[0]), std::string(kCoarseTypes[1]),
       std::string(kCoarseTypes[2]), std::string(kCoarseTypes[3])})
      .Fingerprint();
  return fingerprint;
}

ModelFile FromCoarse(const CoarseModel &coarse) {
  ModelFile model;
  model.kind = ModelKind::kCoarse;
  model.taxonomy_fingerprint = CoarseFingerprint();
  model.dictionary = coarse.dictionary;
  for (std::string_view name : kCoarseTypes) model.classes.emplace_back(name);
  model.softmax = coarse.softmax;
  return model;
}

CoarseModel ToCoarse(ModelFile model) {
  if (model.kind != ModelKind::kCoarse) throw Error("not a coarse model file");
  CoarseModel coarse;
  coarse.dictionary = std::move(model.dictionary);
  coarse.softmax = std::move(model.softmax);
  return coarse;
}

std::vector<double> PredictLabelProbabilities(const ModelFile &model,
                                              const SparseFeatureVector &x) {
  switch (model.kind) {
    case ModelKind::kLocal: return PredictProbabilities(model.local, x);
    case ModelKind::kFlat: return model.softmax.Probabilities(x);
    case ModelKind::kCoarse: break;
  }
  throw Error("coarse models do not predict taxonomy labels");
}

}  // namespace finetype
