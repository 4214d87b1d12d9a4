//
// Copyright 2026 The NeuGuard Lab Authors
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
//

#ifndef NEUGUARD_NN_ACTIVATION_INTERNAL_H_
#define NEUGUARD_NN_ACTIVATION_INTERNAL_H_

#include "neuguard/common.h"
#include "neuguard/nn/model.h"

namespace neuguard::nn {

Matrix ApplyActivation(Activation activation, const Matrix& pre);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_ACTIVATION_INTERNAL_H_
