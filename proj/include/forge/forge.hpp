/**
 * Copyright 2026 The Matte Forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Umbrella header.

#include "forge/attributes.hpp"
#include "forge/balance.hpp"
#include "forge/builder.hpp"
#include "forge/catalog.hpp"
#include "forge/composite.hpp"
#include "forge/css_colors.hpp"
#include "forge/error.hpp"
#include "forge/expressions.hpp"
#include "forge/grounding.hpp"
#include "forge/layout.hpp"
#include "forge/lexicon.hpp"
#include "forge/logic.hpp"
#include "forge/manifest.hpp"
#include "forge/metrics.hpp"
#include "forge/parser.hpp"
#include "forge/png_io.hpp"
#include "forge/random.hpp"
#include "forge/raster.hpp"
#include "forge/stats.hpp"
#include "forge/synthetic.hpp"
#include "forge/tables.hpp"
#include "forge/wordbags.hpp"
