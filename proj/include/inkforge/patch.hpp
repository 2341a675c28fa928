// Copyright 2026 The Inkforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <utility>
#include <vector>

#include "inkforge/error.hpp"
#include "inkforge/raster.hpp"

namespace inkforge {

/// Square patch grid: side length and stride between anchors. Trailing image
/// regions the stride grid does not cover are dropped.
struct PatchSpec {
  int size = 480;
  int stride = 480;

  void validate() const {
    if (size < 1 || stride < 1) {
      fail(ErrorKind::InvalidArgument,
           "PatchSpec: size and stride must be >= 1");
    }
  }
};

struct PatchOffset {
  int x = 0;
  int y = 0;
  bool operator==(const PatchOffset&) const = default;
};

/// Anchor offsets (i*stride, j*stride) keeping the patch in bounds, row-major.
/// Count per axis is floor((dim - size)/stride) + 1, or zero when the image
/// is smaller than the patch.
inline std::vector<PatchOffset> patch_offsets(int width, int height,
                                              const PatchSpec& spec) {
  spec.validate();
  std::vector<PatchOffset> offsets;
  if (width < spec.size || height < spec.size) return offsets;
  const int nx = (width - spec.size) / spec.stride + 1;
  const int ny = (height - spec.size) / spec.stride + 1;
  offsets.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      offsets.push_back({i * spec.stride, j * spec.stride});
    }
  }
  return offsets;
}

inline RasterImage crop(const RasterImage& img, const PatchOffset& at,
                        int size) {
  RasterImage out = RasterImage::make(size, size, img.channels);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        out.at(x, y, c) = img.at(at.x + x, at.y + y, c);
      }
    }
  }
  return out;
}

inline BinaryMask crop(const BinaryMask& mask, const PatchOffset& at,
                       int size) {
  BinaryMask out = BinaryMask::make(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      out.set(x, y, mask.at(at.x + x, at.y + y));
    }
  }
  return out;
}

struct CropResult {
  std::vector<std::pair<PatchOffset, RasterImage>> patches;
  bool undersized = false;  // image smaller than the patch: empty, no error
};

inline CropResult crop_patches(const RasterImage& img, const PatchSpec& spec) {
  CropResult result;
  const std::vector<PatchOffset> offsets =
      patch_offsets(img.width, img.height, spec);
  if (offsets.empty()) {
    result.undersized = true;
    return result;
  }
  result.patches.reserve(offsets.size());
  for (const PatchOffset& at : offsets) {
    result.patches.emplace_back(at, crop(img, at, spec.size));
  }
  return result;
}

struct AlignedCrop {
  PatchOffset offset;
  RasterImage patch;
  BinaryMask gt_patch;
};

struct AlignedCropResult {
  std::vector<AlignedCrop> crops;
  bool undersized = false;
};

/// Crops content and ground truth at identical offsets so the pair stays
/// registered; any transform applied later must be applied to both members.
inline AlignedCropResult crop_aligned(const RasterImage& img,
                                      const BinaryMask& gt,
                                      const PatchSpec& spec) {
  if (img.width != gt.width || img.height != gt.height) {
    fail(ErrorKind::InvalidArgument,
         "crop_aligned: image and ground truth dimensions differ");
  }
  AlignedCropResult result;
  const std::vector<PatchOffset> offsets =
      patch_offsets(img.width, img.height, spec);
  if (offsets.empty()) {
    result.undersized = true;
    return result;
  }
  result.crops.reserve(offsets.size());
  for (const PatchOffset& at : offsets) {
    result.crops.push_back(
        {at, crop(img, at, spec.size), crop(gt, at, spec.size)});
  }
  return result;
}

/// All eight dihedral variants of a square patch in the fixed enumeration
/// order of transform_from_index; element 0 is the input itself.
inline std::array<RasterImage, 8> augment_set(const RasterImage& patch) {
  if (patch.width != patch.height) {
    fail(ErrorKind::InvalidArgument, "augment_set: patch must be square");
  }
  std::array<RasterImage, 8> out;
  for (int t = 0; t < 8; ++t) {
    out[t] = apply_transform(patch, transform_from_index(t));
  }
  return out;
}

}  // namespace inkforge
