#!/usr/bin/env python3
# Copyright 2026 The viewadj Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes core/testdata/geometry_vectors.json.

Expected values are computed here with plain float math (and shapely for
IoU), independently of the C++ geometry code. Both the server tests and the
viewfinder client check against this file.
"""

import json
import math
import random
import sys

from shapely.geometry import Polygon

KINDS = ["Left", "Right", "Up", "Down", "ZoomIn", "ZoomOut", "Clockwise", "CounterClockwise"]


def corners(b):
    c, s = math.cos(b["alpha"]), math.sin(b["alpha"])
    out = []
    for vx, vy in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        x, y = vx * b["w"] / 2, vy * b["h"] / 2
        out.append([b["cx"] + c * x - s * y, b["cy"] + s * x + c * y])
    return out


def apply(b, p):
    return {
        "cx": b["cx"] + b["w"] * p["ox"],
        "cy": b["cy"] + b["h"] * p["oy"],
        "w": b["w"] * (1 + p["oz"]),
        "h": b["h"] * (1 + p["oz"]),
        "alpha": b["alpha"] + p["oalpha"],
    }


def perturbation_for(kind, m):
    p = {"ox": 0.0, "oy": 0.0, "oz": 0.0, "oalpha": 0.0}
    f = m / 100.0
    if kind == "Left":
        p["ox"] = -f
    elif kind == "Right":
        p["ox"] = f
    elif kind == "Up":
        p["oy"] = -f
    elif kind == "Down":
        p["oy"] = f
    elif kind == "ZoomIn":
        p["oz"] = -f
    elif kind == "ZoomOut":
        p["oz"] = f
    elif kind == "Clockwise":
        p["oalpha"] = -m
    else:
        p["oalpha"] = m
    return p


def iou(a, b):
    pa, pb = Polygon(corners(a)), Polygon(corners(b))
    inter = pa.intersection(pb).area
    return inter / (pa.area + pb.area - inter)


def rand_box(rng):
    w = rng.uniform(0.1, 0.8)
    return {
        "cx": rng.uniform(0.2, 0.8),
        "cy": rng.uniform(0.2, 0.8),
        "w": w,
        "h": rng.choice([w, rng.uniform(0.1, 0.8)]),
        "alpha": rng.choice([0.0, rng.uniform(-math.pi / 4, math.pi / 4)]),
    }


def main():
    rng = random.Random(20261014)
    apply_cases, suggestion_cases, iou_cases = [], [], []
    for _ in range(40):
        b = rand_box(rng)
        p = {"ox": 0.0, "oy": 0.0, "oz": 0.0, "oalpha": 0.0}
        axes = rng.sample(["ox", "oy", "oz", "oalpha"], rng.choice([1, 1, 2, 4]))
        for a in axes:
            p[a] = rng.uniform(-0.45, 0.45) if a != "oalpha" else rng.uniform(-0.8, 0.8)
        out = apply(b, p)
        apply_cases.append({"box": b, "perturbation": p, "expected": out,
                            "expected_corners": corners(out)})
    for kind in KINDS:
        for _ in range(3):
            b = rand_box(rng)
            rot = kind in ("Clockwise", "CounterClockwise")
            m = rng.uniform(math.pi / 36, math.pi / 4) if rot else rng.uniform(5, 45)
            p = perturbation_for(kind, m)
            suggestion_cases.append({"box": b,
                                     "suggestion": {"adjust": True, "kind": kind, "magnitude": m},
                                     "perturbation": p, "expected": apply(b, p)})
    b = rand_box(rng)
    suggestion_cases.append({"box": b, "suggestion": {"adjust": False},
                             "perturbation": {"ox": 0.0, "oy": 0.0, "oz": 0.0, "oalpha": 0.0},
                             "expected": b})
    sq = {"cx": 0.5, "cy": 0.5, "w": 0.4, "h": 0.4, "alpha": 0.0}
    iou_cases.append({"a": sq, "b": dict(sq, alpha=math.pi / 4), "expected": iou(sq, dict(sq, alpha=math.pi / 4))})
    for _ in range(20):
        a = rand_box(rng)
        b = apply(a, {"ox": rng.uniform(-0.3, 0.3), "oy": rng.uniform(-0.3, 0.3),
                      "oz": rng.uniform(-0.3, 0.3), "oalpha": rng.uniform(-0.5, 0.5)})
        iou_cases.append({"a": a, "b": b, "expected": iou(a, b)})

    doc = {
        "version": 1,
        "tolerance": 1e-9,
        "conventions": {
            "coordinates": "normalized source coordinates, x right, y down",
            "corners": "c + R(alpha) v for v = (-w/2,-h/2), (w/2,-h/2), (w/2,h/2), (-w/2,h/2)",
            "apply": "cx' = cx + w*ox, cy' = cy + h*oy, w' = w*(1+oz), h' = h*(1+oz), alpha' = alpha + oalpha",
        },
        "apply_perturbation": apply_cases,
        "apply_suggestion": suggestion_cases,
        "rotated_iou": iou_cases,
    }
    out = sys.argv[1] if len(sys.argv) > 1 else "core/testdata/geometry_vectors.json"
    with open(out, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
