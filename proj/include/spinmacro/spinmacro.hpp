// Copyright 2026 The spinmacro Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "spinmacro/bench.hpp"
#include "spinmacro/error.hpp"
#include "spinmacro/isingqpt.hpp"
#include "spinmacro/json_io.hpp"
#include "spinmacro/lindblad.hpp"
#include "spinmacro/macromeasure.hpp"
#include "spinmacro/msdm.hpp"
#include "spinmacro/numfmt.hpp"
#include "spinmacro/phasespace.hpp"
#include "spinmacro/rng.hpp"
#include "spinmacro/spincore.hpp"
