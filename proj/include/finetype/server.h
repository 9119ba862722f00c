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


#ifndef FINETYPE_SERVER_H_
#define FINETYPE_SERVER_H_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "finetype/annotation_store.h"
#include "finetype/corpus.h"
#include "finetype/taxonomy.h"

namespace finetype {

struct ApiResponse {
  int status = 200;
  std::string body;  // one JSON value on a single line
};

// Request handling for the annotation API, independent of the transport.
class AnnotationService {
 public:
  using Clock = std::function<long long()>;  // milliseconds since epoch

  AnnotationService(const Taxonomy &tax, std::vector<Document> documents,
                    AnnotationStore &store, Clock clock = {});

  ApiResponse GetTaxonomy() const;
  ApiResponse ListDocuments() const;
  ApiResponse GetDocument(const std::string &id) const;
  ApiResponse PostAnnotation(const std::string &body);
  ApiResponse GetConsensus(const std::string &document,
                           const std::string &min_support) const;
  ApiResponse GetProgress(const std::string &annotator) const;

 private:
  const Document *FindDocument(const std::string &id) const;

  const Taxonomy &tax_;
  std::vector<Document> documents_;
  std::map<std::string, size_t> index_;
  AnnotationStore &store_;
  Clock clock_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;       // 0 picks a free port
  std::string ui_dir;    // static assets served at /, optional
};

class Server {
 public:
  Server(AnnotationService &service, ServeOptions options);
  ~Server();

  // Binds the listening socket and returns the bound port. Throws Error when
  // the port is unavailable.
  int Bind();
  void Run();  // blocks until Stop
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace finetype

#endif  // FINETYPE_SERVER_H_
