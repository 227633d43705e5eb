/*
 * Copyright 2026 The wmpg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WMPG_WMPG_HPP
#define WMPG_WMPG_HPP

#include "wmpg/bounds.hpp"
#include "wmpg/boundary.hpp"
#include "wmpg/chainvalue.hpp"
#include "wmpg/dot.hpp"
#include "wmpg/game.hpp"
#include "wmpg/graph.hpp"
#include "wmpg/io.hpp"
#include "wmpg/linalg.hpp"
#include "wmpg/mdp.hpp"
#include "wmpg/product.hpp"
#include "wmpg/qualitative.hpp"
#include "wmpg/rational.hpp"
#include "wmpg/simulate.hpp"
#include "wmpg/solver.hpp"
#include "wmpg/ssg.hpp"
#include "wmpg/strategy.hpp"
#include "wmpg/verifier.hpp"
#include "wmpg/window.hpp"

#endif
