// Copyright 2026 The gbdyn Authors
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

#ifndef GBDYN_MODELZOO_ZOO_H_
#define GBDYN_MODELZOO_ZOO_H_

#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/modelzoo/model_spec.h"

namespace gbdyn::modelzoo {

// Networks are freshly initialized from the spec's seed. Throws ConfigError
// for an invalid spec, e.g. a white-box pendulum component with N != 2.
dynamics::Model Build(const ModelSpec& spec);

// Reports the component kinds of a built model.
Components Describe(const dynamics::DynModel& model);

}  // namespace gbdyn::modelzoo

#endif  // GBDYN_MODELZOO_ZOO_H_
