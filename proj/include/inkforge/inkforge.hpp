// Copyright 2026 The Inkforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "inkforge/catalog.hpp"
#include "inkforge/corpus_eval.hpp"
#include "inkforge/error.hpp"
#include "inkforge/manifest.hpp"
#include "inkforge/metrics.hpp"
#include "inkforge/patch.hpp"
#include "inkforge/pipeline.hpp"
#include "inkforge/png_io.hpp"
#include "inkforge/poisson.hpp"
#include "inkforge/raster.hpp"
#include "inkforge/rng.hpp"
#include "inkforge/threshold.hpp"
