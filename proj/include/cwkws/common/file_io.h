// include/cwkws/common/file_io.h

// Copyright 2026  The cwkws Authors

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

#ifndef CWKWS_COMMON_FILE_IO_H_
#define CWKWS_COMMON_FILE_IO_H_

#include <filesystem>
#include <string>

#include "cwkws/common/error.h"

namespace cwkws {

/// Whole-file read; throws `missing_code` if the file cannot be opened.
std::string ReadFileToString(const std::filesystem::path& path,
                             ErrorCode missing_code = ErrorCode::kIoError);

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
void WriteStringToFile(const std::filesystem::path& path, const std::string& bytes);

/// Appends `v` as little-endian float64.
void AppendDoubleLe(std::string& out, double v);
double ReadDoubleLe(const char* p);

}  // namespace cwkws

#endif  // CWKWS_COMMON_FILE_IO_H_
