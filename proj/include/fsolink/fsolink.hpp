// SPDX-License-Identifier: Apache-2.0
//
// fsolink: free-space optical link capacity and channel statistics
// Copyright (C) 2026 fsolink contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "fsolink/capacity.hpp"
#include "fsolink/channel.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/moments.hpp"
#include "fsolink/montecarlo.hpp"
#include "fsolink/quadrature.hpp"
#include "fsolink/rng.hpp"
#include "fsolink/specfun.hpp"
#include "fsolink/sweep.hpp"
