/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "latentgeo/error.hpp"

namespace latentgeo {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid_input";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::VersionMismatch: return "version_mismatch";
        case ErrorKind::Config: return "config";
        case ErrorKind::MissingCheckpoint: return "missing_checkpoint";
        case ErrorKind::DisconnectedGraph: return "disconnected_graph";
        case ErrorKind::InsufficientNeighbors: return "insufficient_neighbors";
        case ErrorKind::SingleClass: return "single_class";
        case ErrorKind::ZeroVariance: return "zero_variance";
        case ErrorKind::Numerical: return "numerical";
    }
    return "unknown";
}

}  // namespace latentgeo
