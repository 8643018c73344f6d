// Copyright 2026 The iconforge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "iconforge/aggregate.hpp"
#include "iconforge/bbox.hpp"
#include "iconforge/config.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/eval.hpp"
#include "iconforge/image_io.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"
#include "iconforge/parallel.hpp"
#include "iconforge/proposals.hpp"
#include "iconforge/render.hpp"
#include "iconforge/report.hpp"
#include "iconforge/rng.hpp"
#include "iconforge/summarize.hpp"
#include "iconforge/synthgen.hpp"
#include "iconforge/tiler.hpp"
#include "iconforge/toy.hpp"
