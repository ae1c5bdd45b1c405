// Copyright 2026 dmtlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License.  You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include "dmtlab/channel.hpp"
#include "dmtlab/code_criterion.hpp"
#include "dmtlab/codebook_io.hpp"
#include "dmtlab/covariance.hpp"
#include "dmtlab/errors.hpp"
#include "dmtlab/info_metrics.hpp"
#include "dmtlab/montecarlo.hpp"
#include "dmtlab/rng.hpp"
#include "dmtlab/tradeoff.hpp"
#include "dmtlab/types.hpp"
