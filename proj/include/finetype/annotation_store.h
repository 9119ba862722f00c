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


#ifndef FINETYPE_ANNOTATION_STORE_H_
#define FINETYPE_ANNOTATION_STORE_H_

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "finetype/agreement.h"
#include "finetype/taxonomy.h"

namespace finetype {

// Environment variable that, when set, replaces the store path given on the
// command line.
inline constexpr const char *kStoreEnvVar = "FINETYPE_STORE";

std::string ResolveStorePath(const std::string &configured);

// Reads an annotation log. A final line without a newline is a torn write
// and is dropped; any other malformed line is an error.
std::vector<AnnotationRecord> ReadAnnotationLog(const std::string &filename,
                                                const Taxonomy &tax);

// Append-only annotation log. Appends are serialized and reach the disk
// (fsync) before Append returns. Readers take an immutable snapshot without
// locking.
class AnnotationStore {
 public:
  using Snapshot = std::shared_ptr<const std::vector<AnnotationRecord>>;

  AnnotationStore(std::string filename, const Taxonomy &tax);
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore &) = delete;
  AnnotationStore &operator=(const AnnotationStore &) = delete;

  void Append(const AnnotationRecord &record);
  Snapshot snapshot() const;
  const std::string &filename() const { return filename_; }

 private:
  std::string filename_;
  const Taxonomy &tax_;
  int fd_ = -1;
  std::mutex write_mutex_;
  Snapshot records_;
};

}  // namespace finetype

#endif  // FINETYPE_ANNOTATION_STORE_H_
