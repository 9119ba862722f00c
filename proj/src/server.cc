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


#include "finetype/server.h"

#include <chrono>
#include <set>

#include "finetype/error.h"
#include "finetype/format.h"
#include "httplib.h"
#include "json.hpp"

namespace finetype {
namespace {

using json = nlohmann::json;

ApiResponse Ok(const json &j) { return {200, j.dump()}; }

ApiResponse Fail(int status, const std::string &message) {
  return {status, json{{"error", message}}.dump()};
}

long long NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

AnnotationService::AnnotationService(const Taxonomy &tax,
                                     std::vector<Document> documents,
                                     AnnotationStore &store, Clock clock)
    : tax_(tax),
      documents_(std::move(documents)),
      store_(store),
      clock_(clock ? std::move(clock) : Clock(NowMs)) {
  for (size_t i = 0; i < documents_.size(); ++i) {
    if (!index_.emplace(documents_[i].id, i).second) {
      throw Error("duplicate document id " + documents_[i].id);
    }
  }
}

const Document *AnnotationService::FindDocument(const std::string &id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &documents_[it->second];
}

ApiResponse AnnotationService::GetTaxonomy() const {
  json labels = json::array();
  for (LabelId id = 0; id < tax_.size(); ++id) {
    const LabelId parent = tax_.parent(id);
    labels.push_back({{"path", tax_.path(id)},
                      {"depth", tax_.depth(id)},
                      {"parent", parent == kNoLabel ? json(nullptr)
                                                    : json(tax_.path(parent))}});
  }
  return Ok({{"labels", labels}});
}

ApiResponse AnnotationService::ListDocuments() const {
  json docs = json::array();
  for (const Document &doc : documents_) {
    docs.push_back({{"id", doc.id},
                    {"split", SplitName(doc.split)},
                    {"mentions", doc.mentions.size()}});
  }
  return Ok({{"documents", docs}});
}

ApiResponse AnnotationService::GetDocument(const std::string &id) const {
  const Document *doc = FindDocument(id);
  if (doc == nullptr) return Fail(404, "unknown document " + id);
  return {200, DocumentToRecord(*doc, tax_)};
}

ApiResponse AnnotationService::PostAnnotation(const std::string &body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return Fail(400, "request body must be a JSON object");
  }
  for (const auto &[key, value] : j.items()) {
    if (key != "annotator" && key != "document" && key != "mention" &&
        key != "labels") {
      return Fail(400, "unknown field '" + key + "'");
    }
  }
  j["timestamp"] = clock_();
  AnnotationRecord record;
  try {
    record = ParseAnnotation(j.dump(), tax_);
  } catch (const Error &e) {
    return Fail(400, e.what());
  }
  const Document *doc = FindDocument(record.document);
  if (doc == nullptr) return Fail(400, "unknown document " + record.document);
  bool found = false;
  for (const Mention &m : doc->mentions) found = found || m.id == record.mention;
  if (!found) {
    return Fail(400, "unknown mention " + record.mention + " in document " +
                         record.document);
  }
  try {
    store_.Append(record);
  } catch (const Error &e) {
    return Fail(500, e.what());
  }
  return Ok({{"status", "saved"},
             {"annotation", json::parse(AnnotationToRecord(record, tax_))}});
}

ApiResponse AnnotationService::GetConsensus(
    const std::string &document, const std::string &min_support) const {
  const Document *doc = FindDocument(document);
  if (doc == nullptr) return Fail(404, "unknown document " + document);
  int support = 2;
  if (!min_support.empty()) {
    try {
      support = static_cast<int>(ParseLong(min_support));
    } catch (const Error &) {
      return Fail(400, "min_support must be an integer");
    }
    if (support < 1) return Fail(400, "min_support must be at least 1");
  }
  std::vector<AnnotationRecord> records;
  for (const AnnotationRecord &r : *store_.snapshot()) {
    if (r.document == document) records.push_back(r);
  }
  const auto latest = LatestByMention(records);
  json mentions = json::array();
  for (const Mention &m : doc->mentions) {
    auto it = latest.find({document, m.id});
    json annotators = json::array();
    LabelSet labels;
    if (it != latest.end()) {
      for (const AnnotationRecord &r : it->second) annotators.push_back(r.annotator);
      labels = Consensus(it->second, support, tax_);
    }
    mentions.push_back({{"mention", m.id},
                        {"annotators", annotators},
                        {"labels", tax_.ToPaths(labels)}});
  }
  return Ok({{"document", document},
             {"min_support", support},
             {"mentions", mentions}});
}

ApiResponse AnnotationService::GetProgress(const std::string &annotator) const {
  std::set<MentionKey> done;
  for (const AnnotationRecord &r : *store_.snapshot()) {
    if (r.annotator == annotator) done.insert({r.document, r.mention});
  }
  json docs = json::array();
  long annotated = 0;
  long total = 0;
  for (const Document &doc : documents_) {
    long n = 0;
    for (const Mention &m : doc.mentions) n += done.count({doc.id, m.id});
    annotated += n;
    total += static_cast<long>(doc.mentions.size());
    docs.push_back({{"id", doc.id},
                    {"annotated", n},
                    {"mentions", doc.mentions.size()}});
  }
  return Ok({{"annotator", annotator},
             {"annotated", annotated},
             {"mentions", total},
             {"documents", docs}});
}

struct Server::Impl {
  AnnotationService &service;
  ServeOptions options;
  httplib::Server http;
};

namespace {

void Reply(httplib::Response &res, const ApiResponse &api) {
  res.status = api.status;
  res.set_content(api.body + "\n", "application/json");
}

}  // namespace

Server::Server(AnnotationService &service, ServeOptions options)
    : impl_(new Impl{service, std::move(options), {}}) {
  httplib::Server &http = impl_->http;
  AnnotationService &svc = impl_->service;
  // SO_REUSEPORT (the library default) would let a second server share a
  // busy port.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  http.Get("/api/taxonomy", [&svc](const httplib::Request &,
                                   httplib::Response &res) {
    Reply(res, svc.GetTaxonomy());
  });
  http.Get("/api/documents", [&svc](const httplib::Request &,
                                    httplib::Response &res) {
    Reply(res, svc.ListDocuments());
  });
  http.Get(R"(/api/documents/([^/]+))",
           [&svc](const httplib::Request &req, httplib::Response &res) {
             Reply(res, svc.GetDocument(req.matches[1]));
           });
  http.Post("/api/annotations",
            [&svc](const httplib::Request &req, httplib::Response &res) {
              Reply(res, svc.PostAnnotation(req.body));
            });
  http.Get(R"(/api/consensus/([^/]+))",
           [&svc](const httplib::Request &req, httplib::Response &res) {
             Reply(res, svc.GetConsensus(req.matches[1],
                                         req.get_param_value("min_support")));
           });
  http.Get(R"(/api/progress/([^/]+))",
           [&svc](const httplib::Request &req, httplib::Response &res) {
             Reply(res, svc.GetProgress(req.matches[1]));
           });
  http.set_exception_handler([](const httplib::Request &,
                                httplib::Response &res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception &e) {
      message = e.what();
    } catch (...) {
    }
    Reply(res, Fail(500, message));
  });
  http.set_error_handler([](const httplib::Request &, httplib::Response &res) {
    if (res.body.empty()) {
      Reply(res, Fail(res.status, res.status == 404 ? "not found"
                                                    : "bad request"));
    }
  });
  if (!impl_->options.ui_dir.empty() &&
      !http.set_mount_point("/", impl_->options.ui_dir)) {
    throw Error("cannot serve UI directory " + impl_->options.ui_dir);
  }
}

Server::~Server() { Stop(); }

int Server::Bind() {
  const ServeOptions &o = impl_->options;
  if (o.port < 0 || o.port > 65535) {
    throw Error("port must be in [0, 65535]");
  }
  int port = o.port;
  if (o.port == 0) {
    port = impl_->http.bind_to_any_port(o.host);
    if (port < 0) throw Error("cannot bind " + o.host);
  } else if (!impl_->http.bind_to_port(o.host, o.port)) {
    throw Error("cannot bind " + o.host + ":" + std::to_string(o.port) +
                " (port busy?)");
  }
  return port;
}

void Server::Run() { impl_->http.listen_after_bind(); }

void Server::Stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

}  // namespace finetype
