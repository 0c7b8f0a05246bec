// Copyright 2026 The Polagenda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLAGENDA_ERRORS_H_
#define POLAGENDA_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polagenda {

// Broad failure class. The CLI maps these onto exit codes.
enum class ErrorCategory {
  kConfig,    // bad flags, missing configured paths
  kData,      // malformed or inconsistent input data
  kInternal,  // precondition violations by calling code
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& path)
      : Error(ErrorCategory::kConfig, "cannot open file: " + path),
        path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : Error(ErrorCategory::kData,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id)
      : Error(ErrorCategory::kData, "duplicate id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class EmptyClassError : public Error {
 public:
  explicit EmptyClassError(const std::string& what)
      : Error(ErrorCategory::kData, what) {}
};

class TargetTooLargeError : public Error {
 public:
  TargetTooLargeError(std::size_t target, std::size_t available)
      : Error(ErrorCategory::kData,
              "subsample target " + std::to_string(target) +
                  " exceeds available " + std::to_string(available)) {}
};

class UnknownAccountError : public Error {
 public:
  explicit UnknownAccountError(std::vector<std::string> handles);
  const std::vector<std::string>& handles() const { return handles_; }

 private:
  std::vector<std::string> handles_;
};

class EmptyVocabularyError : public Error {
 public:
  EmptyVocabularyError()
      : Error(ErrorCategory::kData, "no token survives the min_df cut") {}
};

class EmptyCorpusError : public Error {
 public:
  explicit EmptyCorpusError(const std::string& what)
      : Error(ErrorCategory::kData, what) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what)
      : Error(ErrorCategory::kData, what) {}
};

class EmptyDocumentError : public Error {
 public:
  explicit EmptyDocumentError(std::size_t index)
      : Error(ErrorCategory::kData,
              "document " + std::to_string(index) + " has no tokens") {}
};

class IndexError : public Error {
 public:
  IndexError(std::size_t index, std::size_t size)
      : Error(ErrorCategory::kInternal,
              "index " + std::to_string(index) + " out of range [0, " +
                  std::to_string(size) + ")") {}
};

class KTooSmallError : public Error {
 public:
  KTooSmallError()
      : Error(ErrorCategory::kInternal,
              "top-2 assignment needs at least two topics") {}
};

class EmptyHeldoutError : public Error {
 public:
  EmptyHeldoutError()
      : Error(ErrorCategory::kData,
              "held-out set has no in-vocabulary tokens") {}
};

class EmptyReferenceError : public Error {
 public:
  EmptyReferenceError()
      : Error(ErrorCategory::kData, "reference corpus has no tokens") {}
};

class LengthMismatchError : public Error {
 public:
  LengthMismatchError(std::size_t a, std::size_t b)
      : Error(ErrorCategory::kData,
              "label lists differ in length: " + std::to_string(a) +
                  " vs " + std::to_string(b)) {}
};

class UnmappedTopicError : public Error {
 public:
  explicit UnmappedTopicError(std::vector<int> topics);
  const std::vector<int>& topics() const { return topics_; }

 private:
  std::vector<int> topics_;
};

// A data file an earlier stage should have produced (or a human should
// have supplied) is absent.
class MissingDataError : public Error {
 public:
  explicit MissingDataError(const std::string& path)
      : Error(ErrorCategory::kData, "missing input file: " + path),
        path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Bad argument values (config invariants).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what)
      : Error(ErrorCategory::kConfig, what) {}
};

}  // namespace polagenda

#endif  // POLAGENDA_ERRORS_H_
