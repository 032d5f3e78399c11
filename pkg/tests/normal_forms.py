"""Random commuting tuples with known support, built from block normal forms.

Each block sits over its own point q and has the shape q_i * I + (nilpotent
polynomial part). The block-diagonal tuple is then conjugated by a random
integer matrix with entries in [-5, 5].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from matrix_scheme.core import DenseMatrix, inverse
from matrix_scheme.core.matrix import mat_mul
from matrix_scheme.matrixpoint import MatrixTuple, new_tuple


def jordan_nilpotent(s: int) -> list[list[Fraction]]:
    return [[Fraction(1) if j == i + 1 else Fraction(0) for j in range(s)] for i in range(s)]


def _mm(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def _add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale(c, a):
    return [[c * x for x in row] for row in a]


def _eye(s):
    return [[Fraction(int(i == j)) for j in range(s)] for i in range(s)]


def _kron(a, b):
    return [[a[i // len(b)][j // len(b)] * b[i % len(b)][j % len(b)]
             for j in range(len(a) * len(b))] for i in range(len(a) * len(b))]


@dataclass
class Block:
    q: tuple
    size: int
    kind: str                  # "jordan", "split" (several Jordan blocks) or "tensor"
    parts: tuple               # nilpotent matrices per coordinate
    single_jordan: tuple       # per coordinate: does A_i - q_i have a single Jordan block here


@dataclass
class NormalFormCase:
    tuple: MatrixTuple
    blocks: list
    conjugator: DenseMatrix

    @property
    def r(self) -> int:
        return self.tuple.r

    @property
    def n(self) -> int:
        return self.tuple.n

    def expected_support(self) -> list[tuple[tuple, int]]:
        return sorted(((b.q, b.size) for b in self.blocks), key=lambda p: p[0])


def _poly_in(nil, coeffs):
    out = [[Fraction(0)] * len(nil) for _ in nil]
    power = nil
    for c in coeffs:
        out = _add(out, _scale(c, power))
        power = _mm(power, nil)
    return out


def _block(rng: random.Random, size: int, q: tuple, n: int) -> Block:
    if size == 4 and rng.random() < 0.4:
        n1 = _kron(jordan_nilpotent(2), _eye(2))
        n2 = _kron(_eye(2), jordan_nilpotent(2))
        n12 = _mm(n1, n2)
        parts = []
        for _ in range(n):
            a, b, c = (Fraction(rng.randint(-3, 3)) for _ in range(3))
            parts.append(_add(_add(_scale(a, n1), _scale(b, n2)), _scale(c, n12)))
        return Block(q, size, "tensor", tuple(parts), tuple(False for _ in parts))
    if size >= 2 and rng.random() < 0.3:
        cut = rng.randint(1, size - 1)
        nil = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size - 1):
            if i != cut - 1:
                nil[i][i + 1] = Fraction(1)
        kind = "split"
    else:
        nil = jordan_nilpotent(size)
        kind = "jordan"
    parts, single = [], []
    for _ in range(n):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(max(size - 1, 0))]
        parts.append(_poly_in(nil, coeffs) if coeffs else [[Fraction(0)]])
        single.append(kind == "jordan" and (size == 1 or coeffs[0] != 0))
    return Block(q, size, kind, tuple(parts), tuple(single))


def random_conjugator(rng: random.Random, r: int) -> tuple[DenseMatrix, DenseMatrix]:
    while True:
        s = DenseMatrix([[rng.randint(-5, 5) for _ in range(r)] for _ in range(r)])
        try:
            return s, inverse(s)
        except Exception:
            continue


def random_case(rng: random.Random, r_max: int = 6, n_max: int = 3) -> NormalFormCase:
    r = rng.randint(1, r_max)
    n = rng.randint(1, n_max)
    sizes = []
    left = r
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s
    points: set = set()
    blocks = []
    for s in sizes:
        while True:
            q = tuple(Fraction(rng.randint(-6, 6), rng.choice([1, 1, 1, 2])) for _ in range(n))
            if q not in points:
                points.add(q)
                break
        blocks.append(_block(rng, s, q, n))
    mats = []
    for i in range(n):
        full = [[Fraction(0)] * r for _ in range(r)]
        start = 0
        for b in blocks:
            for a in range(b.size):
                for c in range(b.size):
                    full[start + a][start + c] = b.parts[i][a][c] + (b.q[i] if a == c else 0)
            start += b.size
        mats.append(DenseMatrix(full))
    s, s_inv = random_conjugator(rng, r)
    conj = [mat_mul(mat_mul(s, m), s_inv) for m in mats]
    return NormalFormCase(new_tuple(conj), blocks, s)


def suite(count: int = 200, seed: int = 1729) -> list[NormalFormCase]:
    rng = random.Random(seed)
    return [random_case(rng) for _ in range(count)]
