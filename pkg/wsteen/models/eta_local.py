"""The eta-inverted algebra W(k)[eta^{+-1}][y, x_2, x_3, ...]/(y^2, x_j^2 - 2 x_{j+1}).

x_j = eta^{1 - 2^j} t_j sits in (2^j, 0) and y = eta^{-1} s in (5, 0).
"""

from __future__ import annotations

import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from wsteen.models.errors import GeneratorCapExceeded, InvalidArgument
from wsteen.models.field_data import WittRingModel
from wsteen.models.grading import Bidegree
from wsteen.models.reports import CheckRecord
from wsteen.models.shadow_modules import IndexSet
from wsteen.models.witt_models import FreeKey, HWHWPair, KWHWElement, KWHWModel, PairModel

logger = logging.getLogger(__name__)

Y_WEIGHT = 5


class LocalKey(NamedTuple):
    m: int  # eta power
    eps: int
    J: IndexSet


def local_weight(eps: int, J: IndexSet) -> int:
    return Y_WEIGHT * eps + sum(2 ** j for j in J)


class LocalElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "LocalAlgebra", terms: Optional[Dict[LocalKey, int]] = None):
        self.algebra = algebra
        zero = algebra.witt.zero
        self.terms: Dict[LocalKey, int] = {k: w for k, w in (terms or {}).items() if w != zero}

    def __add__(self, other: "LocalElement") -> "LocalElement":
        return self.algebra.add(self, other)

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        return self.algebra.mul(self, other)

    def __pow__(self, k: int) -> "LocalElement":
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return self.algebra.format(self)


class LocalAlgebra:
    def __init__(self, witt: WittRingModel, gen_cap: int):
        self.witt = witt
        self.gen_cap = gen_cap

    def element(self, terms: Dict[LocalKey, int]) -> LocalElement:
        return LocalElement(self, terms)

    def zero(self) -> LocalElement:
        return LocalElement(self)

    def one(self) -> LocalElement:
        return self.monomial(0, 0, IndexSet())

    def monomial(self, m: int, eps: int, J: IndexSet, w: Optional[int] = None) -> LocalElement:
        return LocalElement(self, {LocalKey(m, eps, J): self.witt.one if w is None else w})

    def eta(self, power: int = 1) -> LocalElement:
        return self.monomial(power, 0, IndexSet())

    def x(self, j: int) -> LocalElement:
        if j < 2:
            raise InvalidArgument("x_j starts at j = 2")
        if j > self.gen_cap:
            raise GeneratorCapExceeded(j, self.gen_cap, "x")
        return self.monomial(0, 0, IndexSet.e(j))

    def y(self) -> LocalElement:
        return self.monomial(0, 1, IndexSet())

    def scale(self, k: int, x: LocalElement) -> LocalElement:
        return LocalElement(self, {key: self.witt.scale(k, w) for key, w in x.terms.items()})

    def bidegree(self, key: LocalKey) -> Bidegree:
        return Bidegree(key.m + local_weight(key.eps, key.J), key.m)

    def add(self, x: LocalElement, y: LocalElement) -> LocalElement:
        terms = dict(x.terms)
        for key, w in y.terms.items():
            terms[key] = self.witt.add(terms.get(key, self.witt.zero), w)
        return LocalElement(self, terms)

    def mul_keys(self, a: LocalKey, b: LocalKey) -> Optional[Tuple[LocalKey, int]]:
        if a.eps and b.eps:
            return None
        J = a.J
        factor = self.witt.one
        pending = list(b.J)
        while pending:
            j = pending.pop()
            if j not in J:
                J = J | IndexSet.e(j)
                continue
            # x_j^2 = 2 x_{j+1}
            J = J.without(j)
            factor = self.witt.mul(factor, self.witt.two)
            if factor == self.witt.zero:
                return None
            if j + 1 > self.gen_cap:
                raise GeneratorCapExceeded(j + 1, self.gen_cap, "x")
            pending.append(j + 1)
        return LocalKey(a.m + b.m, a.eps | b.eps, J), factor

    def mul(self, x: LocalElement, y: LocalElement) -> LocalElement:
        terms: Dict[LocalKey, int] = {}
        for k1, w1 in x.terms.items():
            for k2, w2 in y.terms.items():
                product = self.mul_keys(k1, k2)
                if product is None:
                    continue
                key, factor = product
                w = self.witt.mul(self.witt.mul(w1, w2), factor)
                terms[key] = self.witt.add(terms.get(key, self.witt.zero), w)
        return LocalElement(self, terms)

    def basis(self, weight: int, jmax: int) -> List[Tuple[int, IndexSet]]:
        """Normal-form monomials y^eps x_J of weight-zero degree (weight, 0)."""
        return [
            (eps, J)
            for eps in (0, 1)
            for J in IndexSet.subsets(list(range(2, jmax + 1)))
            if local_weight(eps, J) == weight
        ]

    def format(self, x: LocalElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for key in sorted(x.terms, key=lambda k: (k.eps, k.J.bits, k.m)):
            factors = [] if x.terms[key] == self.witt.one else [self.witt.label(x.terms[key])]
            if key.m:
                factors.append(f"eta^{key.m}")
            if key.eps:
                factors.append("y")
            factors += [f"x{j}" for j in key.J]
            parts.append("*".join(factors) or "1")
        return " + ".join(parts)


def local_mul(x: LocalElement, y: LocalElement) -> LocalElement:
    return x.algebra.mul(x, y)


def local_algebra(model: KWHWModel) -> LocalAlgebra:
    return LocalAlgebra(model.witt, model.A.gen_cap)


def localize(algebra: LocalAlgebra, x: KWHWElement) -> LocalElement:
    """Kill torsion; send [w]_n * s^eps t_J to w eta^{eps - n + sum(2^j - 1)} y^eps x_J."""
    terms: Dict[LocalKey, int] = {}
    for (key, n), w in x.free.items():
        m = key.eps - n + sum(2 ** j - 1 for j in key.J)
        local = LocalKey(m, key.eps, key.J)
        terms[local] = algebra.witt.add(terms.get(local, algebra.witt.zero), w)
    return LocalElement(algebra, terms)


def sample_elements(model: KWHWModel, rng: np.random.Generator, count: int, jmax: int,
                    torsion: bool = True) -> List[KWHWElement]:
    """Random sums of free monomials over K^W, plus an occasional c(I) or c_1(I)."""
    tower, witt = model.tower, model.witt
    indices = list(range(2, jmax + 1))
    sets = IndexSet.subsets(indices)
    out = []
    for _ in range(count):
        x = model.zero()
        for _ in range(int(rng.integers(1, 4))):
            n = int(rng.integers(-2, 2))
            group = sorted(tower.group(n))
            w = group[int(rng.integers(len(group)))]
            key = FreeKey(int(rng.integers(2)), sets[int(rng.integers(len(sets)))])
            x = x + model.element({(key, n): w})
        if torsion and rng.random() < 0.3:
            small = [I for I in sets if len(I) <= 1]
            I = small[int(rng.integers(len(small)))]
            x = x + (model.c1(I) if rng.random() < 0.5 or I.is_empty else model.c(I))
        out.append(x)
    return out


def random_pairs(pairs: PairModel, rng: np.random.Generator, count: int, jmax: int) -> List[HWHWPair]:
    """Pairs (lift(b) + tau * lift(b'), b); tau dies in k^M_** H_W Z, so each is compatible."""
    model = pairs.kwhw
    elements = sample_elements(model, rng, 2 * count, jmax)
    tau = model.A.tau()
    return [
        pairs.make_pair(model.lift(b) + tau * model.lift(other), b)
        for b, other in zip(elements[::2], elements[1::2])
    ]


def verify_corollary(model: KWHWModel, jmax: int = 4, samples: int = 200, seed: int = 2024) -> List[CheckRecord]:
    if jmax > model.A.gen_cap:
        raise GeneratorCapExceeded(jmax, model.A.gen_cap, "x")
    L = local_algebra(model)
    witt = model.witt
    records: List[CheckRecord] = []

    rng = np.random.default_rng(seed)
    elements = sample_elements(model, rng, 2 * samples, min(jmax, 3))
    bad = []
    for a, b in zip(elements[::2], elements[1::2]):
        if localize(L, a * b) != localize(L, a) * localize(L, b):
            bad.append(f"{a} ; {b}")
    records.append(CheckRecord(
        name="localize is multiplicative",
        passed=not bad,
        detail=f"{samples} random products" + (f"; first failure {bad[0]}" if bad else ""),
        data={"failures": len(bad)},
    ))

    for a in (model.one(), model.rho()):
        if localize(L, a * model.eta()) != localize(L, a) * L.eta(1):
            records.append(CheckRecord(name="localize is eta-linear", passed=False, detail=str(a)))
            break
    else:
        records.append(CheckRecord(name="localize is eta-linear", passed=True))

    for j in range(2, min(jmax, model.A.gen_cap - 1) + 1):
        t = model.t(j)
        lhs = localize(L, t * t)
        rhs = localize(L, t) * localize(L, t)
        relation = L.x(j) * L.x(j) == L.scale(2, L.x(j + 1))
        records.append(CheckRecord(
            name=f"x{j}^2 = 2*x{j + 1}",
            passed=lhs == rhs and relation,
            detail=f"localize(t{j}^2) = {lhs}; localize(t{j})^2 = {rhs}",
        ))
    records.append(CheckRecord(name="y^2 = 0", passed=not (L.y() * L.y()) and not localize(L, model.s() * model.s())))

    torsion_images = [localize(L, model.c(IndexSet.e(i))) for i in range(2, jmax + 1)]
    torsion_images += [localize(L, model.c1(I)) for I in IndexSet.subsets(list(range(2, jmax + 1)))]
    records.append(CheckRecord(name="torsion dies", passed=not any(torsion_images)))

    records.extend(_rank_checks(model, L, jmax))
    records.extend(_power_chains(L, jmax))

    e = witt.exponent
    records.append(CheckRecord(
        name="coefficient exponent",
        passed=e <= 2 and all(witt.scale(2 ** e, w) == witt.zero for w in witt.elements()),
        detail=f"exponent {e} on W of order {witt.size}",
    ))
    return records


def _rank_checks(model: KWHWModel, L: LocalAlgebra, jmax: int) -> List[CheckRecord]:
    """Free generators s^eps t_J hit distinct normal-form monomials with unit coefficient."""
    top = 2 ** (jmax + 1)
    series = np.zeros(top + 1, dtype=np.int64)
    series[0] = 1
    for g in [Y_WEIGHT] + [2 ** j for j in range(2, jmax + 1)]:
        shifted = np.zeros_like(series)
        shifted[g:] = series[:-g]
        series = series + shifted
    reached: Dict[int, set] = {}
    collapses = []
    for eps in (0, 1):
        for J in IndexSet.subsets(list(range(2, jmax + 1))):
            weight = local_weight(eps, J)
            if weight > top:
                continue
            generator = model.s() if eps else model.one()
            for j in J:
                generator = generator * model.t(j)
            image = localize(L, generator)
            keys = list(image.terms)
            if len(keys) != 1 or image.terms[keys[0]] != L.witt.one:
                collapses.append(str(FreeKey(eps, J)))
                continue
            reached.setdefault(weight, set()).add((keys[0].eps, keys[0].J))
    mismatched = [
        P for P in range(top + 1)
        if len(reached.get(P, ())) != int(series[P]) or len(L.basis(P, jmax)) != int(series[P])
    ]
    return [CheckRecord(
        name="free rank per degree",
        passed=not collapses and not mismatched,
        detail=f"degrees up to ({top},0)"
        + (f"; collapsed {collapses}" if collapses else "")
        + (f"; mismatched weights {mismatched}" if mismatched else ""),
        data={"ranks": {str(P): int(series[P]) for P in range(top + 1) if series[P]}},
    )]


def _power_chains(L: LocalAlgebra, jmax: int) -> List[CheckRecord]:
    records = []
    for j in range(2, jmax + 1):
        x = L.x(j)
        ok = True
        for k in range(1, 9):
            left = L.one()
            for _ in range(k):
                left = left * x
            right = L.one()
            for _ in range(k):
                right = x * right
            half = x ** (k // 2)
            balanced = half * half * (x if k % 2 else L.one())
            if not (left == right == balanced):
                ok = False
                break
        if j + 2 <= L.gen_cap and x ** 4 != L.scale(8, L.x(j + 2)):
            ok = False
        records.append(CheckRecord(name=f"x{j} power chains", passed=ok, detail=f"x{j}^k for k <= 8"))
    return records
