// Copyright 2026 The sasr Authors
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

#ifndef SASR_ERRORS_HPP
#define SASR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sasr {

/// Base class for every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define SASR_DEFINE_ERROR(Name, tag)                 \
  class Name : public Error {                        \
   public:                                           \
    using Error::Error;                              \
    const char* kind() const noexcept override {     \
      return tag;                                    \
    }                                                \
  }

SASR_DEFINE_ERROR(InvalidArgument, "invalid-argument");
SASR_DEFINE_ERROR(TruncationError, "truncation-error");
SASR_DEFINE_ERROR(ConvergenceError, "convergence-error");
SASR_DEFINE_ERROR(ResourceError, "resource-error");
SASR_DEFINE_ERROR(NumericalDegeneracy, "numerical-degeneracy");
SASR_DEFINE_ERROR(IoError, "io-error");

#undef SASR_DEFINE_ERROR

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace sasr

#endif  // SASR_ERRORS_HPP
