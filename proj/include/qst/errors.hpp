// Copyright 2026 The qst authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qst {

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpectrumError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DistributionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotAState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateObservable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DecompositionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KernelNotPD : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inapplicable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotImplementedError : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qst
