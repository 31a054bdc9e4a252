// src/augment/adversarial.cc

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

#include "cwkws/augment/adversarial.h"

#include <algorithm>
#include <cmath>

#include "cwkws/common/error.h"

namespace cwkws {

std::string RecipeText(const ConcatRecipe& recipe) {
  std::string out;
  for (const auto& s : recipe.subwords) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

ConcatRecipe KeywordRecipe(const std::vector<std::string>& keyword_subwords) {
  return {keyword_subwords, Label::kPositive};
}

Waveform ConcatSample(const ConcatRecipe& recipe, const SubwordInventory& inv, Rng& rng) {
  if (recipe.subwords.empty()) Fail(ErrorCode::kInvalidConfig, "empty concat recipe");
  std::vector<const InventoryEntry*> picks;
  picks.reserve(recipe.subwords.size());
  std::size_t total = 0;
  for (const auto& sw : recipe.subwords) {
    const auto& entries = inv.Entries(sw);
    const auto* e = &entries[rng.UniformIndex(entries.size())];
    picks.push_back(e);
    total += e->length();
  }
  Waveform out;
  out.sample_rate_hz = picks.front()->source->sample_rate_hz;
  out.samples.reserve(total);
  for (const auto* e : picks) {
    if (e->source->sample_rate_hz != out.sample_rate_hz)
      Fail(ErrorCode::kUnsupportedFormat, "inventory mixes sample rates");
    auto s = e->samples();
    out.samples.insert(out.samples.end(), s.begin(), s.end());
  }
  return out;
}

void MaskSpec::Validate() const {
  if (!(min_frac > 0.0 && min_frac <= max_frac && max_frac < 1.0))
    Fail(ErrorCode::kInvalidConfig, "mask fractions need 0 < min <= max < 1");
  if (!(noise_scale >= 0.0)) Fail(ErrorCode::kInvalidConfig, "mask noise_scale must be >= 0");
}

Waveform MaskSample(const Waveform& wave, const MaskSpec& spec, Rng& rng,
                    MaskRegion* region) {
  if (wave.empty()) Fail(ErrorCode::kEmptyAudio, "cannot mask an empty waveform");
  spec.Validate();
  const double frac = spec.min_frac == spec.max_frac
                          ? spec.min_frac
                          : spec.min_frac + (spec.max_frac - spec.min_frac) * rng.Uniform01();
  const std::size_t n = wave.size();
  const auto length = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(frac * static_cast<double>(n))));
  const std::size_t start = rng.UniformIndex(n - length + 1);
  const double sigma = spec.noise_scale * Rms(wave.samples);
  const auto noise = GaussianSegment(length, sigma, rng);

  Waveform out = wave;
  std::copy(noise.begin(), noise.end(), out.samples.begin() + static_cast<std::ptrdiff_t>(start));
  if (region) *region = {frac, start, length};
  return out;
}

std::vector<ConcatRecipe> ConfusionRecipes(const std::vector<std::string>& keyword) {
  const std::size_t n = keyword.size();
  if (n < 2) Fail(ErrorCode::kTooShort, "confusion recipes need a keyword of >= 2 subwords");

  std::vector<ConcatRecipe> out;
  auto push = [&](std::vector<std::string> subwords) {
    if (subwords == keyword) return;
    ConcatRecipe r{std::move(subwords), Label::kNegative};
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  };
  auto slice = [&](std::size_t begin, std::size_t len) {
    return std::vector<std::string>(keyword.begin() + static_cast<std::ptrdiff_t>(begin),
                                    keyword.begin() + static_cast<std::ptrdiff_t>(begin + len));
  };

  for (std::size_t drop = 0; drop < n; ++drop) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i)
      if (i != drop) s.push_back(keyword[i]);
    push(std::move(s));
  }
  for (std::size_t len = n - 1; len >= 2; --len)
    for (std::size_t begin = 0; begin + len <= n; ++begin) push(slice(begin, len));
  const std::size_t half = (n + 1) / 2;
  for (std::size_t begin = 0; begin + half <= n; ++begin) {
    auto s = slice(begin, half);
    auto twice = s;
    twice.insert(twice.end(), s.begin(), s.end());
    push(std::move(twice));
  }
  return out;
}

}  // namespace cwkws
