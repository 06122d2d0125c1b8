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

#include <string>

#include "qst/errors.hpp"

namespace qst {

/// Scalar field of the quantum Hilbert space.  Self-adjoint matrices are
/// symmetric for Real and Hermitian for Complex; all superoperator algebra
/// runs over real coordinates either way.
enum class FieldTag { Real, Complex };

/// Real dimension of the space of self-adjoint q x q matrices.
inline int herm_dim(FieldTag field, int q) {
    return field == FieldTag::Real ? q * (q + 1) / 2 : q * q;
}

/// Damping factor of an exact rank-1 unitary design: 1/(q/2+1) for the real
/// field and 1/(q+1) for the complex field.
inline double alpha_q(FieldTag field, int q) {
    return field == FieldTag::Real ? 1.0 / (0.5 * q + 1.0) : 1.0 / (q + 1.0);
}

inline std::string field_name(FieldTag field) {
    return field == FieldTag::Real ? "real" : "complex";
}

inline FieldTag field_from_name(const std::string& name) {
    if (name == "real") return FieldTag::Real;
    if (name == "complex") return FieldTag::Complex;
    throw ConfigError("unknown field '" + name + "' (expected real|complex)");
}

}  // namespace qst
