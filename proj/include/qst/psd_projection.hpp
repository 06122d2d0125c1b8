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

#include "qst/herm.hpp"
#include "qst/measurement.hpp"

namespace qst {

/// Sum-preserving threshold step: given a non-increasing sequence with
/// positive sum, returns the closest (in squared error) non-increasing
/// non-negative sequence with the same sum.  Two-phase backward scan, O(q)
/// after sorting; the sum is preserved with compensated summation.
RealVector spta(const RealVector& a);

/// Frobenius projection onto {T >= 0, tr T = tr S} for tr S > 0: eigenbasis
/// is preserved, eigenvalues pass through spta.
HermMat trace_preserving_projection(const HermMat& s);

/// Frobenius projection of a unit-trace self-adjoint matrix onto the density
/// matrix set.
DensityMatrix project_to_density(const HermMat& s);

}  // namespace qst
