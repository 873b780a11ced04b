// ctckit/error.h

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCKIT_ERROR_H_
#define CTCKIT_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace ctckit {

// All recoverable failures in the toolkit (bad files, shape mismatches,
// infeasible targets, ...) are reported by throwing Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace internal {
inline void append_to_stream(std::ostringstream&) {}
template <typename T, typename... Rest>
void append_to_stream(std::ostringstream& os, const T& v, const Rest&... rest) {
  os << v;
  append_to_stream(os, rest...);
}
}  // namespace internal

template <typename... Args>
std::string str_cat(const Args&... args) {
  std::ostringstream os;
  internal::append_to_stream(os, args...);
  return os.str();
}

template <typename... Args>
[[noreturn]] void raise(const Args&... args) {
  throw Error(str_cat(args...));
}

template <typename... Args>
void require(bool cond, const Args&... args) {
  if (!cond) raise(args...);
}

}  // namespace ctckit

#endif  // CTCKIT_ERROR_H_
