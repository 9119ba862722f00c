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


#include "finetype/annotation_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "finetype/error.h"

namespace finetype {
namespace {

std::string SystemError(const std::string &what, const std::string &filename) {
  return what + " " + filename + ": " + std::strerror(errno);
}

}  // namespace

std::string ResolveStorePath(const std::string &configured) {
  const char *env = std::getenv(kStoreEnvVar);
  if (env != nullptr && *env != '\0') return env;
  return configured;
}

std::vector<AnnotationRecord> ReadAnnotationLog(const std::string &filename,
                                                const Taxonomy &tax) {
  std::vector<AnnotationRecord> records;
  std::ifstream in(filename, std::ios::binary);
  if (!in) return records;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) break;  // torn final write
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      records.push_back(ParseAnnotation(line, tax));
    } catch (const Error &e) {
      throw ParseError(filename + ": " + e.what(), line_no);
    }
  }
  return records;
}

AnnotationStore::AnnotationStore(std::string filename, const Taxonomy &tax)
    : filename_(std::move(filename)), tax_(tax) {
  records_ = std::make_shared<const std::vector<AnnotationRecord>>(
      ReadAnnotationLog(filename_, tax_));
  fd_ = ::open(filename_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC,
               0644);
  if (fd_ < 0) throw Error(SystemError("cannot open annotation store", filename_));
  // Cut a torn final line so the next append starts a fresh record.
  std::ifstream in(filename_, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const size_t last_newline = text.rfind('\n');
  const size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (keep < text.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(keep)) != 0 || ::fsync(fd_) != 0) {
      throw Error(SystemError("cannot repair annotation store", filename_));
    }
  }
}

AnnotationStore::~AnnotationStore() {
  if (fd_ >= 0) ::close(fd_);
}

void AnnotationStore::Append(const AnnotationRecord &record) {
  const std::string line = AnnotationToRecord(record, tax_) + "\n";
  std::lock_guard<std::mutex> lock(write_mutex_);
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(SystemError("cannot write annotation store", filename_));
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw Error(SystemError("cannot sync annotation store", filename_));
  }
  auto next = std::make_shared<std::vector<AnnotationRecord>>(*snapshot());
  next->push_back(record);
  std::atomic_store(&records_, Snapshot(std::move(next)));
}

AnnotationStore::Snapshot AnnotationStore::snapshot() const {
  return std::atomic_load(&records_);
}

}  // namespace finetype
