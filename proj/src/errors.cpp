/*
 * Copyright 2026 The neurosim Authors
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

#include "neurosim/errors.hpp"

namespace neurosim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameterDomain: return "parameter-domain";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kNoInteriorOptimum: return "no-interior-optimum";
    case ErrorCode::kNoSpeedup: return "no-speedup";
    case ErrorCode::kZeroHousekeeping: return "zero-housekeeping";
    case ErrorCode::kCausality: return "causality";
    case ErrorCode::kRouting: return "routing";
    case ErrorCode::kRemap: return "remap";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kWorkloadDefinition: return "workload-definition";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace neurosim
