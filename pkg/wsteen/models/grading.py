"""Bidegree bookkeeping and enumeration of graded exponent vectors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple


@dataclass(frozen=True, order=True)
class Bidegree:
    """Motivic bidegree (p, q): topological degree and weight."""

    p: int
    q: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "Bidegree":
        return Bidegree(-self.p, -self.q)

    def scale(self, k: int) -> "Bidegree":
        return Bidegree(k * self.p, k * self.q)

    @property
    def excess(self) -> int:
        """p - q; additive, and strictly positive on every polynomial generator."""
        return self.p - self.q

    def __str__(self) -> str:
        return f"({self.p},{self.q})"

    @classmethod
    def parse(cls, text: str) -> "Bidegree":
        p, q = text.strip().strip("()").split(",")
        return cls(int(p), int(q))


ZERO = Bidegree(0, 0)
TAU = Bidegree(0, -1)
RHO = Bidegree(-1, -1)
# degree of both Sq2-derivations
D_SHIFT = Bidegree(2, 1)


def tau_degree(i: int) -> Bidegree:
    return Bidegree(2 ** (i + 1) - 1, 2 ** i - 1)


def xi_degree(i: int) -> Bidegree:
    return Bidegree(2 ** (i + 1) - 2, 2 ** i - 1)


def xi_set_degree(indices) -> Bidegree:
    """Degree of the product of xi-bar_i over a set of indices."""
    total = ZERO
    for i in indices:
        total = total + xi_degree(i)
    return total


def km_degree(d: int) -> Bidegree:
    return Bidegree(-d, -d)


@dataclass(frozen=True)
class GradedGenerator:
    """A polynomial generator with its bidegree and an optional exponent cap."""

    name: str
    degree: Bidegree
    max_exponent: Optional[int] = None


@lru_cache(maxsize=None)
def _words(shape: Tuple[Tuple[int, int], ...], excess: int) -> Tuple[Tuple[int, ...], ...]:
    if not shape:
        return ((),) if excess == 0 else ()
    (step, cap), rest = shape[0], shape[1:]
    out = []
    k = 0
    while k * step <= excess and (cap < 0 or k <= cap):
        for tail in _words(rest, excess - k * step):
            out.append((k,) + tail)
        k += 1
    return tuple(out)


def words_of_excess(generators: Sequence[GradedGenerator], excess: int) -> List[Tuple[int, ...]]:
    """All exponent vectors whose total excess is exactly ``excess``."""
    if excess < 0:
        return []
    shape = []
    for gen in generators:
        if gen.degree.excess <= 0:
            raise ValueError(f"generator {gen.name} has non-positive excess")
        shape.append((gen.degree.excess, -1 if gen.max_exponent is None else gen.max_exponent))
    return list(_words(tuple(shape), excess))


def words_of_degree(
    generators: Sequence[GradedGenerator], b: Bidegree
) -> List[Tuple[Tuple[int, ...], int]]:
    """Exponent vectors of excess b.excess, paired with the k^M degree that completes them to b.

    k^M classes have excess zero, so a word of degree w reaches b exactly when
    w.p - b.p = d >= 0 (and then the weights agree automatically).
    """
    out = []
    for word in words_of_excess(generators, b.excess):
        p = sum(k * gen.degree.p for k, gen in zip(word, generators))
        d = p - b.p
        if d >= 0:
            out.append((word, d))
    return out


def word_degree(generators: Sequence[GradedGenerator], word: Sequence[int]) -> Bidegree:
    total = ZERO
    for k, gen in zip(word, generators):
        total = total + gen.degree.scale(k)
    return total
