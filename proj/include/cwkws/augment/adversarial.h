// include/cwkws/augment/adversarial.h

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

#ifndef CWKWS_AUGMENT_ADVERSARIAL_H_
#define CWKWS_AUGMENT_ADVERSARIAL_H_

#include <string>
#include <vector>

#include "cwkws/audio/wav.h"
#include "cwkws/augment/inventory.h"
#include "cwkws/common/labels.h"
#include "cwkws/common/rng.h"

namespace cwkws {

/// Ordered subword labels to splice together. The full keyword sequence is
/// the only positive recipe.
struct ConcatRecipe {
  std::vector<std::string> subwords;
  Label label = Label::kNegative;

  bool operator==(const ConcatRecipe&) const = default;
};

std::string RecipeText(const ConcatRecipe& recipe);

ConcatRecipe KeywordRecipe(const std::vector<std::string>& keyword_subwords);

/// Splices one uniformly drawn inventory segment per recipe position, back to
/// back with no gap or crossfade. Speakers may differ between positions.
/// Throws kUnknownSubword, or kUnsupportedFormat on mixed sample rates.
Waveform ConcatSample(const ConcatRecipe& recipe, const SubwordInventory& inv, Rng& rng);

/// Replace a contiguous span of frac * len samples, frac ~ U[min_frac,
/// max_frac], with Gaussian noise whose std is noise_scale * RMS(input).
struct MaskSpec {
  double min_frac = 0.40;
  double max_frac = 0.60;
  double noise_scale = 1.0;

  void Validate() const;
};

/// Where MaskSample put the noise.
struct MaskRegion {
  double frac = 0.0;
  std::size_t start = 0;
  std::size_t length = 0;
};

/// Output length and rate equal the input's; samples outside the region are
/// untouched. Throws kEmptyAudio.
Waveform MaskSample(const Waveform& wave, const MaskSpec& spec, Rng& rng,
                    MaskRegion* region = nullptr);

/// Rule-based confusers for a keyword of n >= 2 subwords, in this order and
/// deduplicated, never equal to the keyword:
///   1. every single-subword deletion;
///   2. every contiguous fragment of length 2 .. n-1 (longest first);
///   3. every contiguous fragment of length ceil(n/2) said twice.
/// For n = 2 fragments are empty and the doubled pieces are single subwords.
/// Throws kTooShort.
std::vector<ConcatRecipe> ConfusionRecipes(const std::vector<std::string>& keyword_subwords);

}  // namespace cwkws

#endif  // CWKWS_AUGMENT_ADVERSARIAL_H_
