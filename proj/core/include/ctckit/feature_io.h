// ctckit/feature_io.h

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCKIT_FEATURE_IO_H_
#define CTCKIT_FEATURE_IO_H_

#include <string>

#include "ctckit/matrix.h"

namespace ctckit {

// Feature file layout (all little-endian):
//   8 bytes  magic "CTCKFEAT"
//   u32      version (currently 1)
//   u32      T (frames)
//   u32      D (coefficients)
//   T*D f64  row-major feature values
void write_feature_file(const Matrix& features, const std::string& path);
Matrix read_feature_file(const std::string& path);

}  // namespace ctckit

#endif  // CTCKIT_FEATURE_IO_H_
