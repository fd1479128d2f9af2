// Copyright 2026 the bpseg authors
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


// Umbrella header: the whole library.

#ifndef BPSEG_BPSEG_HPP
#define BPSEG_BPSEG_HPP

#include "bpseg/bp.hpp"
#include "bpseg/corpus.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/factor_graph.hpp"
#include "bpseg/fast_bp.hpp"
#include "bpseg/kmeans.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/metrics.hpp"
#include "bpseg/parallel.hpp"
#include "bpseg/rng.hpp"
#include "bpseg/text.hpp"

#endif  // BPSEG_BPSEG_HPP
