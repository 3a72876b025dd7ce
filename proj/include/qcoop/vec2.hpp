// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOOP_VEC2_HPP_
#define QCOOP_VEC2_HPP_

#include <cmath>

namespace qcoop {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) noexcept {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(Vec2 o) noexcept {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return a -= b; }
    friend constexpr Vec2 operator*(double k, Vec2 v) noexcept { return {k * v.x, k * v.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;

    constexpr double norm_squared() const noexcept { return x * x + y * y; }
    double norm() const noexcept { return std::hypot(x, y); }
};

}  // namespace qcoop

#endif  // QCOOP_VEC2_HPP_
