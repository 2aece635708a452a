/*
 * Copyright 2026 The fogplace Authors
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

/**
 * \file fogplace/fogplace.hpp
 *
 * \brief Everything except the command line.
 */

#ifndef FOGPLACE_FOGPLACE_HPP
#define FOGPLACE_FOGPLACE_HPP

#include <fogplace/baselines.hpp>
#include <fogplace/cost.hpp>
#include <fogplace/delay.hpp>
#include <fogplace/matrix.hpp>
#include <fogplace/model.hpp>
#include <fogplace/optimizer.hpp>
#include <fogplace/random.hpp>
#include <fogplace/scenario.hpp>
#include <fogplace/sim.hpp>
#include <fogplace/text.hpp>
#include <fogplace/traffic.hpp>

#endif // FOGPLACE_FOGPLACE_HPP
