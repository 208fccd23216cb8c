// Copyright 2026 The grantlex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-tailed Nemenyi critical values q_alpha(k): the studentized range
// quantile with infinite degrees of freedom divided by sqrt(2). Mirrors
// data/nemenyi_q.tsv.

#pragma once

#include <array>

namespace grantlex {

struct NemenyiRow {
  int k;
  double q01;  // alpha = 0.01
  double q05;  // alpha = 0.05
  double q10;  // alpha = 0.10
};

inline constexpr std::array<NemenyiRow, 49> kNemenyiTable = {{
    {2, 2.575829, 1.959964, 1.644854},
    {3, 2.913494, 2.343701, 2.052293},
    {4, 3.113250, 2.569032, 2.291341},
    {5, 3.254686, 2.727774, 2.459516},
    {6, 3.363740, 2.849705, 2.588521},
    {7, 3.452213, 2.948320, 2.692732},
    {8, 3.526471, 3.030878, 2.779884},
    {9, 3.590339, 3.101730, 2.854606},
    {10, 3.646292, 3.163684, 2.919889},
    {11, 3.696021, 3.218654, 2.977768},
    {12, 3.740733, 3.268004, 3.029694},
    {13, 3.781318, 3.312739, 3.076733},
    {14, 3.818451, 3.353618, 3.119693},
    {15, 3.852654, 3.391230, 3.159199},
    {16, 3.884343, 3.426041, 3.195743},
    {17, 3.913850, 3.458425, 3.229723},
    {18, 3.941446, 3.488685, 3.261461},
    {19, 3.967357, 3.517073, 3.291224},
    {20, 3.991770, 3.543799, 3.319233},
    {21, 4.014842, 3.569040, 3.345676},
    {22, 4.036710, 3.592946, 3.370712},
    {23, 4.057487, 3.615646, 3.394477},
    {24, 4.077275, 3.637252, 3.417089},
    {25, 4.096161, 3.657861, 3.438651},
    {26, 4.114220, 3.677556, 3.459253},
    {27, 4.131519, 3.696413, 3.478971},
    {28, 4.148118, 3.714498, 3.497878},
    {29, 4.164069, 3.731869, 3.516033},
    {30, 4.179420, 3.748578, 3.533492},
    {31, 4.194212, 3.764672, 3.550305},
    {32, 4.208484, 3.780193, 3.566516},
    {33, 4.222269, 3.795179, 3.582165},
    {34, 4.235598, 3.809664, 3.597288},
    {35, 4.248501, 3.823680, 3.611917},
    {36, 4.261002, 3.837254, 3.626084},
    {37, 4.273125, 3.850413, 3.639814},
    {38, 4.284891, 3.863181, 3.653134},
    {39, 4.296320, 3.875579, 3.666066},
    {40, 4.307430, 3.887627, 3.678631},
    {41, 4.318238, 3.899344, 3.690848},
    {42, 4.328760, 3.910747, 3.702736},
    {43, 4.339009, 3.921852, 3.714312},
    {44, 4.349000, 3.932673, 3.725590},
    {45, 4.358743, 3.943224, 3.736584},
    {46, 4.368252, 3.953518, 3.747310},
    {47, 4.377536, 3.963566, 3.757778},
    {48, 4.386606, 3.973379, 3.768000},
    {49, 4.395470, 3.982969, 3.777987},
    {50, 4.404139, 3.992343, 3.787750}
}};

}  // namespace grantlex
