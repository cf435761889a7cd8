// Copyright 2026 The wavegenre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace wavegenre {

/// Base of every error thrown by the library. The CLI maps subclasses to
/// process exit codes (see tools/wavegenre.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes that cannot be combined by an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Kernel or pool window longer than the (padded) input.
class GeometryError : public Error {
 public:
  GeometryError(const std::string& what, int layer_index = -1)
      : Error(what), layer_index_(layer_index) {}
  int layer_index() const { return layer_index_; }

 private:
  int layer_index_;
};

/// Argument outside the documented domain of an operation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// API misuse, e.g. backward on a variable that was not recorded.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or gradient during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dataset protocol violations (fold construction, leakage, label drift).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Audio that cannot be decoded. Subclasses distinguish the cause.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// RIFF/WAV structure is broken or truncated.
class MalformedAudioError : public IngestError {
 public:
  using IngestError::IngestError;
};

/// Well-formed file in a codec, bit depth or channel layout not handled.
class UnsupportedFormatError : public IngestError {
 public:
  using IngestError::IngestError;
};

/// File decodes to zero samples.
class EmptyAudioError : public IngestError {
 public:
  using IngestError::IngestError;
};

/// Clip shorter than the segmentation window span.
class TooShortError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (unreadable input, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavegenre
