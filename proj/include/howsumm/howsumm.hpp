// Copyright 2026 The howsumm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header.

#include "howsumm/common.hpp"

#include "howsumm/corpus/corpus.hpp"
#include "howsumm/corpus/corruption.hpp"
#include "howsumm/corpus/features.hpp"
#include "howsumm/corpus/text.hpp"
#include "howsumm/corpus/vocabulary.hpp"

#include "howsumm/numcore/adam.hpp"
#include "howsumm/numcore/array.hpp"
#include "howsumm/numcore/checkpoint.hpp"
#include "howsumm/numcore/grad_check.hpp"
#include "howsumm/numcore/layers.hpp"
#include "howsumm/numcore/param_store.hpp"
#include "howsumm/numcore/tape.hpp"

#include "howsumm/models/attention_export.hpp"
#include "howsumm/models/beam_search.hpp"
#include "howsumm/models/config.hpp"
#include "howsumm/models/decode.hpp"
#include "howsumm/models/model.hpp"
#include "howsumm/models/train.hpp"

#include "howsumm/baselines/ngram_lm.hpp"
#include "howsumm/baselines/tfidf.hpp"

#include "howsumm/eval/align.hpp"
#include "howsumm/eval/content_f1.hpp"
#include "howsumm/eval/function_words.hpp"
#include "howsumm/eval/porter.hpp"
#include "howsumm/eval/report.hpp"
#include "howsumm/eval/rouge.hpp"

#include "howsumm/cli/app.hpp"
#include "howsumm/cli/config.hpp"
