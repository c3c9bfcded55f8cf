// Copyright (c) the addq authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace addq {

enum class ErrorKind {
    invalid_argument, // bad shapes, bad config, caps exceeded
    data,             // malformed files, corrupt artifacts, degenerate inputs
    numeric,          // divergence, non-finite values during optimisation
    io,               // filesystem failures
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
            : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept {
        return kind_;
    }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

#define ADDQ_CHECK(cond, kind, msg)                                \
    do {                                                           \
        if (!(cond)) {                                             \
            ::addq::raise(::addq::ErrorKind::kind, (msg));         \
        }                                                          \
    } while (0)

} // namespace addq
