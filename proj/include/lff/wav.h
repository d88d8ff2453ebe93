// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFF_WAV_H_
#define LFF_WAV_H_

#include <string>

#include "lff/audio.h"

namespace lff {

// Reads a RIFF/WAVE file containing 16-bit PCM. Multi-channel audio is
// downmixed to mono by the arithmetic mean of the channels; samples are
// scaled by 1/32768. Throws FormatError on a malformed container,
// UnsupportedFormatError for non-PCM or non-16-bit encodings, and
// EmptyInputError when the data chunk holds no samples.
AudioBuffer LoadWav(const std::string& path);

}  // namespace lff

#endif  // LFF_WAV_H_
