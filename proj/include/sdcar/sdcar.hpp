/*
 * Copyright 2026 The sdcar Authors
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

#pragma once

// Everything in one include.

#include "sdcar/errors.hpp"
#include "sdcar/linalg.hpp"
#include "sdcar/random.hpp"
#include "sdcar/selfdual.hpp"
#include "sdcar/pfaffian.hpp"
#include "sdcar/quasifree.hpp"
#include "sdcar/z2_index.hpp"
#include "sdcar/fock.hpp"
#include "sdcar/gns.hpp"
#include "sdcar/kitaev.hpp"
#include "sdcar/io.hpp"
