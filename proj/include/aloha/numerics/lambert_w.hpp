// Copyright 2026 The Aloha Stability Authors
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

#ifndef ALOHA_NUMERICS_LAMBERT_W_HPP_
#define ALOHA_NUMERICS_LAMBERT_W_HPP_

namespace aloha::numerics {

/// Principal branch W0 on [-1/e, inf). Returns w >= -1 with w*exp(w) = z.
/// Throws DomainError for z < -1/e - 1e-12.
double lambert_w0(double z);

/// Lower branch W-1 on [-1/e, 0). Returns w <= -1 with w*exp(w) = z.
/// Throws DomainError outside [-1/e, 0).
double lambert_wm1(double z);

}  // namespace aloha::numerics

#endif  // ALOHA_NUMERICS_LAMBERT_W_HPP_
