// Copyright 2026 The gptlab Authors
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

#ifndef GPTLAB_ERROR_H
#define GPTLAB_ERROR_H

#include <stdexcept>
#include <string>

namespace gpt {

/// Type mismatch, dangling or doubly-consumed wire, cycle.
struct WiringError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A desk-scale guard (outcome strings, matrix size, arity) was exceeded.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning on an event of probability zero.
struct PostSelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested operation is not defined for the given theory or input.
struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace gpt

#endif
