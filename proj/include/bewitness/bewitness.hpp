// Copyright 2026 The bewitness Authors
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

#include "bewitness/kernel/eig.hpp"
#include "bewitness/kernel/matrix.hpp"
#include "bewitness/kernel/nnls.hpp"
#include "bewitness/kernel/range.hpp"
#include "bewitness/kernel/svd.hpp"
#include "bewitness/product.hpp"
#include "bewitness/random.hpp"
#include "bewitness/rangecrit.hpp"
#include "bewitness/seesaw.hpp"
#include "bewitness/states.hpp"
#include "bewitness/upb.hpp"
#include "bewitness/witness.hpp"
