#!/usr/bin/env python3
# Copyright (C) 2026 The hastings-lab authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact rational evaluation of every acceptance formula on the two-state model
p = (1, 2), gamma = [[1/2, 1/2], [1/2, 1/2]].

Independent of the C++ library: plain fractions, linear space, written straight
from the formulas. The printed values are frozen into tests/test_*.cpp.
"""
from fractions import Fraction as F

p = [F(1), F(2)]
g = [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]


def gam(y, x):  # gamma(y | x)
    return g[x][y]


def a(x, y):  # p(x) / gamma(x|y)
    return p[x] / gam(x, y)


def L(x, y):
    return min(a(x, y), a(y, x))


def H(x, y):
    return max(a(x, y), a(y, x))


def R(x, y):  # gamma(x|y) p(y) / (p(x) gamma(y|x))
    return gam(x, y) * p[y] / (p[x] * gam(y, x))


def mh(x, y): return min(R(x, y), 1)
def bk(x, y): return 1 / (1 + 1 / R(x, y))
def ha(s, x, y): return s(x, y) * bk(x, y)
def stein(d, x, y): return d(x, y) / (p[x] * gam(y, x))
def alpha_m(k, x, y):
    kk = k(x, y)
    return min(kk * gam(x, y) / p[x], 1) * min(p[y] / (kk * gam(y, x)), 1)
def mar_M(M, x, y): return p[y] / (M(x, y) * gam(y, x))
def mar_C(C, x, y): return p[y] / (C(x, y) * H(x, y) * gam(y, x))
def mir(m, x, y): return m(x, y) * gam(x, y) / p[x]
def special(x, y): return min(gam(x, y) / p[x], 1) * min(p[y] / gam(y, x), 1)

const = lambda c: (lambda x, y: F(c))
s_mh = lambda x, y: (1 + 1 / R(x, y)) * min(R(x, y), 1)
s_4c = lambda x, y: min(gam(x, y) / p[x], 1) * min(gam(y, x) / p[y], 1) * (a(x, y) + a(y, x))
d_min = lambda x, y: min(p[y] * gam(x, y), p[x] * gam(y, x))
M_s = lambda s: (lambda x, y: (a(x, y) + a(y, x)) / s(x, y))
m_s = lambda s: (lambda x, y: s(x, y) / (1 / a(x, y) + 1 / a(y, x)))
def s_from_k(k):
    def f(x, y):
        kk = k(x, y)
        if kk >= H(x, y): return (a(x, y) + a(y, x)) / kk
        if kk > L(x, y): return s_mh(x, y)
        return kk * (1 / a(x, y) + 1 / a(y, x))
    return f
def delta_from_k(k):
    def f(x, y):
        kk = k(x, y)
        if kk >= H(x, y): return p[x] * p[y] / kk
        if kk > L(x, y): return d_min(x, y)
        return kk * gam(x, y) * gam(y, x)
    return f
M_d = lambda d: (lambda x, y: p[x] * p[y] / d(x, y))
m_d = lambda d: (lambda x, y: d(x, y) / (gam(x, y) * gam(y, x)))
M_k = lambda k: (lambda x, y: k(x, y) * max(a(x, y) / k(x, y), 1) * max(a(y, x) / k(x, y), 1))
m_k = lambda k: (lambda x, y: k(x, y) * min(a(x, y) / k(x, y), 1) * min(a(y, x) / k(x, y), 1))
s_from_M = lambda M: (lambda x, y: (a(x, y) + a(y, x)) / M(x, y))
s_from_m = lambda m: (lambda x, y: m(x, y) * (1 / a(x, y) + 1 / a(y, x)))
C_bk = lambda x, y: (a(x, y) + a(y, x)) / H(x, y)


def kernel(alpha):
    P = [[F(0)] * 2 for _ in range(2)]
    for x in range(2):
        for y in range(2):
            if x != y:
                P[x][y] = alpha(x, y) * gam(y, x)
        P[x][x] = gam(x, x) * alpha(x, x) + sum((1 - alpha(x, z)) * gam(z, x) for z in range(2))
    return P


out = {
    "L(0,1), H(0,1)": (L(0, 1), H(0, 1)),
    "mh 0->1, 1->0": (mh(0, 1), mh(1, 0)),
    "bk 0->1, 1->0": (bk(0, 1), bk(1, 0)),
    "ha s=1 0->1": ha(const(1), 0, 1),
    "ha s_mh 0->1, 1->0": (ha(s_mh, 0, 1), ha(s_mh, 1, 0)),
    "ha s_4c 0->1": ha(s_4c, 0, 1),
    "ha s=2 0->1 (violation)": ha(const(2), 0, 1),
    "stein dmin 0->1, 1->0": (stein(d_min, 0, 1), stein(d_min, 1, 0)),
    "alpha_m k=6 0->1": alpha_m(const(6), 0, 1),
    "alpha_m k=3 1->0": alpha_m(const(3), 1, 0),
    "alpha_m k=1 1->0, 0->1": (alpha_m(const(1), 1, 0), alpha_m(const(1), 0, 1)),
    "alpha_m k=4 0->1": alpha_m(const(4), 0, 1),
    "mar C=1 0->1": mar_C(const(1), 0, 1),
    "mar C_bk 0->1": mar_C(C_bk, 0, 1),
    "mar M=8 1->0": mar_M(const(8), 1, 0),
    "mir m=L 1->0": mir(L, 1, 0),
    "mir m=1 1->0": mir(const(1), 1, 0),
    "mir m=m_s(1) 0->1": mir(m_s(const(1)), 0, 1),
    "special 0->1, 1->0": (special(0, 1), special(1, 0)),
    "s_mh(0,1)": s_mh(0, 1),
    "M_s(1), m_s(1) at (0,1)": (M_s(const(1))(0, 1), m_s(const(1))(0, 1)),
    "M_s(s_4c)(0,1)": M_s(s_4c)(0, 1),
    "s_from_k k=6,3,1": tuple(s_from_k(const(c))(0, 1) for c in (6, 3, 1)),
    "M_d, m_d (d=1/2)": (M_d(const(F(1, 2)))(0, 1), m_d(const(F(1, 2)))(0, 1)),
    "delta_from_k k=6,3,1": tuple(delta_from_k(const(c))(0, 1) for c in (6, 3, 1)),
    "stein(delta_from_k) 0->1 k=6,3,1": tuple(stein(delta_from_k(const(c)), 0, 1) for c in (6, 3, 1)),
    "M_k, m_k k=3": (M_k(const(3))(0, 1), m_k(const(3))(0, 1)),
    "M_k, m_k k=1": (M_k(const(1))(0, 1), m_k(const(1))(0, 1)),
    "M_k, m_k k=6": (M_k(const(6))(0, 1), m_k(const(6))(0, 1)),
    "s_from_M M=6,4": (s_from_M(const(6))(0, 1), s_from_M(const(4))(0, 1)),
    "s_from_m m=4/3": s_from_m(const(F(4, 3)))(0, 1),
    "C_barker(0,1)": C_bk(0, 1),
    "kernel MH": kernel(mh),
    "kernel BK": kernel(bk),
    "L-step k=3 x=1 y=0 thresholds": (min(3 * gam(1, 0) / p[1], 1), min(p[0] / (3 * gam(0, 1)), 1)),
    "AR M=4 accept y=0, y=1": (p[0] / (4 * F(1, 2)), p[1] / (4 * F(1, 2))),
    "AR expected trials M=4": F(4) / sum(p),
    "IMIR m=1 alpha x=0, x=1": (1 * F(1, 2) / p[0], 1 * F(1, 2) / p[1]),
}
pi = [q / sum(p) for q in p]
Pm = kernel(mh)
out["stationary"] = tuple(pi)
out["expected acceptance MH"] = sum(pi[x] * sum(gam(y, x) * mh(x, y) for y in range(2)) for x in range(2))
out["expected acceptance BK"] = sum(pi[x] * sum(gam(y, x) * bk(x, y) for y in range(2)) for x in range(2))
for k, v in out.items():
    print(f"{k}: {v}")
