"""Presented models of K^W_** H_W Z and of H_W Z_** H_W Z, and the relation verifier.

K^W_** H_W Z is modelled as free-plus-torsion: a free part over the Witt
K-theory tower on the monomials s^eps * t(J), and an eta-torsion part that
lives in the image of d_left inside k^M_** H_W Z. The torsion part is stored
by a lift to H F2_** H_W Z and compared through to_kmhw.

H_W Z_** H_W Z is modelled by compatible pairs (a, b) over the pullback
square: a in H F2_** H_W Z, b in K^W_** H_W Z, with equal images in
k^M_** H_W Z.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from wsteen.models.errors import (
    GeneratorCapExceeded,
    IncompatiblePair,
    InvalidArgument,
    NotInImage,
    UniqueLiftRefused,
    WsteenError,
)
from wsteen.models.field_data import kw_tower
from wsteen.models.gf2 import GF2Solver, gf2_rank, zeros
from wsteen.models.grading import (
    D_SHIFT,
    RHO,
    TAU,
    ZERO,
    Bidegree,
    tau_degree,
    xi_degree,
    xi_set_degree,
)
from wsteen.models.homology_engine import B_DEGREE
from wsteen.models.milnor_dual import AElement
from wsteen.models.reports import IndependenceReport, RelationCheck
from wsteen.models.shadow_modules import HWElement, IndexSet, KMHWElement, ShadowModules

logger = logging.getLogger(__name__)

# degree printed for s; the class tau_0^3 tau_1 it lifts sits at B_DEGREE
PRINTED_S_DEGREE = Bidegree(5, 0)


class FreeKey(NamedTuple):
    """s^eps * prod_{j in J} t_j."""

    eps: int
    J: IndexSet

    def __str__(self) -> str:
        parts = ["s"] if self.eps else []
        parts += [f"t{j}" for j in self.J]
        return "*".join(parts) if parts else "1"


FreePart = Dict[Tuple[FreeKey, int], int]
UNIT_KEY = FreeKey(0, IndexSet())


class KWHWElement:
    """free: (key, n) -> Witt class in K^W_n; torsion: a lift of an eta-torsion class."""

    __slots__ = ("model", "free", "torsion")

    def __init__(self, model: "KWHWModel", free: Optional[FreePart] = None, torsion: Optional[AElement] = None):
        self.model = model
        self.free: FreePart = {k: w for k, w in (free or {}).items() if w != model.witt.zero}
        self.torsion = torsion if torsion is not None else model.A.zero()

    def __add__(self, other: "KWHWElement") -> "KWHWElement":
        return self.model.add(self, other)

    def __mul__(self, other: "KWHWElement") -> "KWHWElement":
        return self.model.mul(self, other)

    def __pow__(self, k: int) -> "KWHWElement":
        out = self.model.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KWHWElement):
            return NotImplemented
        return self.model.equal(self, other)

    __hash__ = None

    @property
    def is_torsion(self) -> bool:
        return not self.free

    def __str__(self) -> str:
        return self.model.format(self)


class KWHWModel:
    """K^W_** H_W Z over a preset with a Witt model and k^M_2 = 0."""

    def __init__(self, shadows: ShadowModules):
        self.shadows = shadows
        self.A = shadows.A
        self.preset = self.A.preset
        self.tower = kw_tower(self.preset)
        self.witt = self.tower.witt
        if self.A.km.basis(2):
            raise UniqueLiftRefused(
                f"k^M_2 of {self.preset.name} is nonzero; lifts of rho*tau_j are not unique"
            )
        self._rho_n, self._rho_w = self.tower.rho()
        self.b_lift = self.A.power(self.A.tau_i(0), 3) * self.A.tau_i(1)
        self._preimage_solvers: Dict[Bidegree, Tuple[list, list, GF2Solver]] = {}

    # --- constructors ---

    def zero(self) -> KWHWElement:
        return KWHWElement(self)

    def element(self, free: FreePart, torsion: Optional[AElement] = None) -> KWHWElement:
        for (key, n), w in free.items():
            if not self.tower.contains(n, w):
                raise InvalidArgument(f"{self.witt.label(w)} is not in K^W_{n}")
        return KWHWElement(self, dict(free), torsion)

    def scalar(self, n: int, w: int) -> KWHWElement:
        if not self.tower.contains(n, w):
            raise InvalidArgument(f"{self.witt.label(w)} is not in K^W_{n}")
        return KWHWElement(self, {(UNIT_KEY, n): w})

    def one(self) -> KWHWElement:
        return self.scalar(0, self.witt.one)

    def rho(self) -> KWHWElement:
        return self.scalar(self._rho_n, self._rho_w)

    def eta(self) -> KWHWElement:
        return self.scalar(-1, self.witt.one)

    def s(self) -> KWHWElement:
        return KWHWElement(self, {(FreeKey(1, IndexSet()), 0): self.witt.one})

    def t(self, j: int) -> KWHWElement:
        if j < 2:
            raise InvalidArgument("free generators t_j start at j = 2")
        if j > self.A.gen_cap:
            raise GeneratorCapExceeded(j, self.A.gen_cap, "t")
        return KWHWElement(self, {(FreeKey(0, IndexSet.e(j)), 0): self.witt.one})

    def torsion(self, lift) -> KWHWElement:
        element = lift.element if isinstance(lift, HWElement) else lift
        return KWHWElement(self, None, element)

    def c(self, I: IndexSet) -> KWHWElement:
        return self.torsion(self.shadows.c_element(I))

    def c1(self, I: IndexSet) -> KWHWElement:
        return self.torsion(self.shadows.c1_element(I))

    # --- the residue map r-bar ---

    def _key_image(self, key: FreeKey) -> AElement:
        out = self.b_lift if key.eps else self.A.one()
        for j in key.J:
            out = out * self.A.tau_i(j)
        return out

    def _free_lift(self, free: FreePart) -> AElement:
        total = self.A.zero()
        for (key, n), w in free.items():
            coefficient = self.tower.residue(n, w)
            if coefficient:
                total = total + self.A.coefficient(coefficient) * self._key_image(key)
        return total

    def free_lift(self, x: KWHWElement) -> AElement:
        return self._free_lift(x.free)

    def lift(self, x: KWHWElement) -> AElement:
        return self._free_lift(x.free) + x.torsion

    def residue(self, x: KWHWElement) -> KMHWElement:
        return self.shadows.to_kmhw(self.lift(x))

    # --- arithmetic ---

    def _accumulate(self, free: FreePart, key: Tuple[FreeKey, int], w: int) -> None:
        total = self.witt.add(free.get(key, self.witt.zero), w)
        if total == self.witt.zero:
            free.pop(key, None)
        else:
            free[key] = total

    def add(self, x: KWHWElement, y: KWHWElement) -> KWHWElement:
        free = dict(x.free)
        for key, w in y.free.items():
            self._accumulate(free, key, w)
        return KWHWElement(self, free, x.torsion + y.torsion)

    def mul_keys(self, a: FreeKey, b: FreeKey) -> Optional[Tuple[FreeKey, int, int]]:
        """Product of two free monomials as (key, extra K^W degree, Witt factor); None when zero."""
        if a.eps and b.eps:
            return None
        J = a.J
        dn, dw = 0, self.witt.one
        pending = list(b.J)
        while pending:
            j = pending.pop()
            if j not in J:
                J = J | IndexSet.e(j)
                continue
            # t_j^2 = rho t_{j+1}
            J = J.without(j)
            dn += self._rho_n
            dw = self.witt.mul(dw, self._rho_w)
            if dw == self.witt.zero:
                return None
            if j + 1 > self.A.gen_cap:
                raise GeneratorCapExceeded(j + 1, self.A.gen_cap, "t")
            pending.append(j + 1)
        return FreeKey(a.eps | b.eps, J), dn, dw

    def _mul_free(self, x: FreePart, y: FreePart) -> FreePart:
        free: FreePart = {}
        for (k1, n1), w1 in x.items():
            for (k2, n2), w2 in y.items():
                product = self.mul_keys(k1, k2)
                if product is None:
                    continue
                key, dn, dw = product
                w = self.witt.mul(self.witt.mul(w1, w2), dw)
                if w != self.witt.zero:
                    self._accumulate(free, (key, n1 + n2 + dn), w)
        return free

    def mul(self, x: KWHWElement, y: KWHWElement) -> KWHWElement:
        free = self._mul_free(x.free, y.free)
        torsion = self.lift(x) * self.lift(y) + self._free_lift(free)
        return KWHWElement(self, free, torsion)

    def eta_times(self, x: KWHWElement) -> KWHWElement:
        """eta kills torsion and moves K^W_n into K^W_{n-1}."""
        return KWHWElement(self, {(key, n - 1): w for (key, n), w in x.free.items()})

    # --- the residue map against d_left ---

    def key_degree(self, key: FreeKey) -> Bidegree:
        degree = B_DEGREE.scale(key.eps)
        for j in key.J:
            degree = degree + tau_degree(j)
        return degree

    def free_generators(self, b: Bidegree) -> List[KWHWElement]:
        """Single free terms [w]_n * key whose residue lands in k^M_** H_W Z at b."""
        out = []
        sets = IndexSet.subsets(list(range(2, self.A.gen_cap + 1)))
        n = 0
        while self.A.km.basis(n):
            for eps in (0, 1):
                for J in sets:
                    key = FreeKey(eps, J)
                    if self.key_degree(key) - Bidegree(n, n) != b:
                        continue
                    for w in sorted(self.tower.group(n)):
                        if w != self.witt.zero:
                            out.append(KWHWElement(self, {(key, n): w}))
            n += 1
        return out

    def residue_defect(self, x: KWHWElement, y: KWHWElement) -> AElement:
        """Lift of r(xy) + r(x) r(y) on the free parts; eta-torsion when r is multiplicative."""
        return self._free_lift(self._mul_free(x.free, y.free)) + self._free_lift(x.free) * self._free_lift(y.free)

    def residue_is_multiplicative(self, x: KWHWElement, y: KWHWElement) -> bool:
        try:
            self.certify_torsion(self.torsion(self.residue_defect(x, y)))
        except NotInImage:
            return False
        return True

    def equal(self, x: KWHWElement, y: KWHWElement) -> bool:
        if x.free != y.free:
            return False
        diff = x.torsion + y.torsion
        if not diff:
            return True
        return not self.shadows.to_kmhw(diff).terms

    # --- torsion certificates ---

    def _preimage_solver(self, b: Bidegree):
        cached = self._preimage_solvers.get(b)
        if cached is None:
            sh = self.shadows
            sources = sh.kmhw_basis(b + D_SHIFT)
            targets = sh.kmhw_basis(b)
            index = {k: i for i, k in enumerate(targets)}
            matrix = zeros(len(targets), len(sources))
            for j, key in enumerate(sources):
                for image in sh.d_left(sh.kmhw_element([key])).terms:
                    matrix[index[image], j] = 1
            cached = (sources, targets, GF2Solver(matrix))
            self._preimage_solvers[b] = cached
        return cached

    def certify_torsion(self, x: KWHWElement) -> KMHWElement:
        """A preimage under d_left of the torsion class of x."""
        sh = self.shadows
        preimage: set = set()
        for b, part in x.torsion.components().items():
            cls = sh.to_kmhw(part)
            if not cls.terms:
                continue
            sources, targets, solver = self._preimage_solver(b)
            index = {k: i for i, k in enumerate(targets)}
            vec = np.zeros(len(targets), dtype=np.uint8)
            for key in cls.terms:
                vec[index[key]] = 1
            solution = solver.solve(vec)
            if solution is None:
                raise NotInImage(f"torsion class {cls} at {b} is not in the image of d_left")
            preimage ^= {k for k, bit in zip(sources, solution) if bit}
        return sh.kmhw_element(preimage)

    def format(self, x: KWHWElement) -> str:
        parts = []
        for (key, n), w in sorted(x.free.items(), key=lambda kv: (kv[0][1], kv[0][0].eps, kv[0][0].J.bits)):
            parts.append(f"[{self.witt.label(w)}]_{n}*{key}")
        if x.torsion:
            cls = self.shadows.to_kmhw(x.torsion)
            if cls.terms:
                parts.append(f"tors({cls})")
        return " + ".join(parts) if parts else "0"


def kwhw_mul(x: KWHWElement, y: KWHWElement) -> KWHWElement:
    return x.model.mul(x, y)


# --- the pullback pair model ---


@dataclass(frozen=True)
class HWHWPair:
    model: "PairModel"
    a: AElement
    b: KWHWElement

    def __add__(self, other: "HWHWPair") -> "HWHWPair":
        return HWHWPair(self.model, self.a + other.a, self.b + other.b)

    def __mul__(self, other: "HWHWPair") -> "HWHWPair":
        return HWHWPair(self.model, self.a * other.a, self.b * other.b)

    def __pow__(self, k: int) -> "HWHWPair":
        out = self.model.unit()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HWHWPair):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    __hash__ = None

    def __str__(self) -> str:
        return f"({self.a} | {self.b})"


class PairModel:
    """Compatible pairs over the square H_W Z -> H F2, K^W -> k^M."""

    def __init__(self, kwhw: KWHWModel):
        self.kwhw = kwhw
        self.shadows = kwhw.shadows
        self.A = kwhw.A
        self.shape_cache: Dict[int, list] = {}

    def compatible(self, a: AElement, b: KWHWElement) -> bool:
        return not self.shadows.to_kmhw(a + self.kwhw.lift(b)).terms

    def make_pair(self, a, b: KWHWElement) -> HWHWPair:
        element = a.element if isinstance(a, HWElement) else a
        if not self.compatible(element, b):
            raise IncompatiblePair(str(self.shadows.to_kmhw(element)), str(self.kwhw.residue(b)))
        return HWHWPair(self, element, b)

    def ring_axiom_failures(self, x: HWHWPair, y: HWHWPair, z: HWHWPair) -> List[str]:
        failures = []
        if (x * y) * z != x * (y * z):
            failures.append("associativity")
        if x * y != y * x:
            failures.append("commutativity")
        if x * (y + z) != x * y + x * z:
            failures.append("distributivity")
        if x * self.unit() != x:
            failures.append("unit")
        return failures

    # --- scalars ---

    def zero(self) -> HWHWPair:
        return HWHWPair(self, self.A.zero(), self.kwhw.zero())

    def unit(self) -> HWHWPair:
        return HWHWPair(self, self.A.one(), self.kwhw.one())

    def rho(self) -> HWHWPair:
        return HWHWPair(self, self.A.rho(), self.kwhw.rho())

    def left_tau(self) -> HWHWPair:
        return HWHWPair(self, self.A.tau(), self.kwhw.zero())

    def right_tau(self) -> HWHWPair:
        return self.torsion_pair(self.A.eta_right_tau)

    def torsion_pair(self, a: AElement) -> HWHWPair:
        return HWHWPair(self, a, self.kwhw.torsion(a))

    # --- generators ---

    def theorem_generator(self, name: str, I: Optional[IndexSet] = None) -> HWHWPair:
        I = I if I is not None else IndexSet()
        sh, A, kw = self.shadows, self.A, self.kwhw
        if name in ("tau0", "s") or (name.startswith("t") and name[1:].isdigit() and int(name[1:]) >= 2):
            if not I.is_empty:
                raise InvalidArgument(f"{name} takes no index set")
        if name == "tau0":
            return self.torsion_pair(A.tau_i(0))
        if name == "s":
            return HWHWPair(self, kw.b_lift, kw.s())
        if name == "c":
            if I.is_empty:
                return self.unit()
            return self.torsion_pair(sh.c_element(I))
        if name == "c1":
            return self.torsion_pair(sh.c1_element(I))
        if name == "t":
            return HWHWPair(self, A.tau() * sh.xi_bar_set(I), kw.zero())
        if name == "t1":
            return HWHWPair(self, A.tau() * A.tau_i(1) * sh.xi_bar_set(I), kw.zero())
        if name.startswith("t") and name[1:].isdigit():
            j = int(name[1:])
            return HWHWPair(self, A.tau_i(j), kw.t(j))
        raise InvalidArgument(f"unknown generator {name!r}")


def make_pair(model: PairModel, a, b: KWHWElement) -> HWHWPair:
    return model.make_pair(a, b)


def theorem_generator(model: PairModel, name: str, I: Optional[IndexSet] = None) -> HWHWPair:
    return model.theorem_generator(name, I)


# --- printed relations ---


class Sym:
    """A formal expression: printed terms with their bidegrees, and its value."""

    __slots__ = ("terms", "value")

    def __init__(self, terms: Tuple[Tuple[str, Bidegree], ...], value):
        self.terms = terms
        self.value = value

    def __add__(self, other: "Sym") -> "Sym":
        return Sym(self.terms + other.terms, self.value + other.value)

    def __mul__(self, other: "Sym") -> "Sym":
        terms = tuple(
            (_join(a, b), da + db) for a, da in self.terms for b, db in other.terms
        )
        return Sym(terms, self.value * other.value)

    def __pow__(self, k: int) -> "Sym":
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    @property
    def text(self) -> str:
        return " + ".join(label for label, _ in self.terms) or "0"

    @property
    def degrees(self) -> List[Bidegree]:
        return sorted({d for _, d in self.terms})


def _join(a: str, b: str) -> str:
    if a == "1":
        return b
    if b == "1":
        return a
    return f"{a}*{b}"


class Reading(NamedTuple):
    label: str
    c_empty: str = "unit"  # unit | zero
    scalar_side: str = "right"  # side of a tau written to the right
    tau_fix: bool = False


PRINTED = Reading("printed")
EMPTY_SUM = Reading("empty-sum", c_empty="zero")
LEFT_SCALAR = Reading("left-scalar", scalar_side="left")
TAU_FIX = Reading("tau-corrected", tau_fix=True)


class Vocabulary:
    """Generators as Syms, either as pairs or as raw elements of A."""

    def __init__(self, pairs: PairModel, reading: Reading, raw: bool = False):
        self.pairs = pairs
        self.A = pairs.A
        self.sh = pairs.shadows
        self.reading = reading
        self.raw = raw

    def _sym(self, label: str, degree: Bidegree, pair: Callable[[], HWHWPair], element: Callable[[], AElement]) -> Sym:
        return Sym(((label, degree),), element() if self.raw else pair())

    def _torsion(self, label: str, degree: Bidegree, element: Callable[[], AElement]) -> Sym:
        return self._sym(label, degree, lambda: self.pairs.torsion_pair(element()), element)

    def zero(self) -> Sym:
        return Sym((), self.A.zero() if self.raw else self.pairs.zero())

    def one(self) -> Sym:
        return self._sym("1", ZERO, self.pairs.unit, self.A.one)

    def prod(self, factors: Iterable[Sym]) -> Sym:
        out = self.one()
        for f in factors:
            out = out * f
        return out

    def c(self, I: IndexSet) -> Sym:
        if I.is_empty:
            if self.reading.c_empty == "zero":
                return self.zero()
            return self._sym("c({})", ZERO, self.pairs.unit, self.A.one)
        return self._torsion(f"c({I})", xi_set_degree(I) - D_SHIFT, lambda: self.sh.c_element(I))

    def c1(self, I: IndexSet) -> Sym:
        if I.is_empty:
            return self._torsion("t0", tau_degree(0), lambda: self.A.tau_i(0))
        return self._torsion(f"c1({I})", tau_degree(0) + xi_set_degree(I), lambda: self.sh.c1_element(I))

    def e(self, i: int) -> IndexSet:
        return IndexSet.e(i)

    def t(self, I: IndexSet) -> Sym:
        return self._sym(
            f"t({I})", TAU + xi_set_degree(I),
            lambda: self.pairs.theorem_generator("t", I),
            lambda: self.A.tau() * self.sh.xi_bar_set(I),
        )

    def t1(self, I: IndexSet) -> Sym:
        return self._sym(
            f"t1({I})", Bidegree(3, 0) + xi_set_degree(I),
            lambda: self.pairs.theorem_generator("t1", I),
            lambda: self.A.tau() * self.A.tau_i(1) * self.sh.xi_bar_set(I),
        )

    def s(self) -> Sym:
        return self._sym(
            "s", B_DEGREE,
            lambda: self.pairs.theorem_generator("s"),
            lambda: self.pairs.kwhw.b_lift,
        )

    def tj(self, j: int) -> Sym:
        return self._sym(
            f"t{j}", tau_degree(j),
            lambda: self.pairs.theorem_generator(f"t{j}"),
            lambda: self.A.tau_i(j),
        )

    def tau_i(self, i: int) -> Sym:
        return self._torsion(f"t{i}", tau_degree(i), lambda: self.A.tau_i(i))

    def tau0(self) -> Sym:
        return self.tau_i(0)

    def rho(self) -> Sym:
        return self._sym("rho", RHO, self.pairs.rho, self.A.rho)

    def tau_left(self) -> Sym:
        return self._sym("tau", TAU, self.pairs.left_tau, self.A.tau)

    def tau_right(self) -> Sym:
        if self.reading.scalar_side == "left":
            return self.tau_left()
        return self._torsion("tau", TAU, lambda: self.A.eta_right_tau)

    def xi(self, i: int) -> Sym:
        if i == 0:
            return self.one()
        return self._torsion(f"x{i}", xi_degree(i), lambda: self.A.xi(i))

    def xb(self, i: int) -> Sym:
        return self._torsion(f"xb{i}", xi_degree(i), lambda: self.A.xi_bar(i))

    def xi_tau(self, j: int) -> Sym:
        """xi_j with a tau written to its right."""
        return self._right_scaled(f"x{j}*tau", xi_degree(j), lambda: self.A.xi(j))

    def xbar_tau(self, j: int) -> Sym:
        return self._right_scaled(f"xb{j}*tau", xi_degree(j), lambda: self.A.xi_bar(j))

    def _right_scaled(self, label: str, degree: Bidegree, element: Callable[[], AElement]) -> Sym:
        if self.reading.scalar_side == "left":
            value = lambda: self.A.tau() * element()
        else:
            value = lambda: element() * self.A.eta_right_tau
        return self._torsion(label, degree + TAU, value)

    def q2(self) -> Sym:
        """rho*t_2 + xi_2*tau."""
        return self.rho() * self.tj(2) + self.xi_tau(2)

    def c_sum(self, I: IndexSet, J: IndexSet, second: Callable[[IndexSet], Sym]) -> Sym:
        """The common right-hand side shape of the c-relations."""
        sym = I ^ J
        inter = I & J
        total = self.zero()
        for i in inter:
            rest = self.prod(self.c(self.e(j + 1)) for j in inter.without(i))
            total = total + self.c(self.e(i)) * second(sym.with_index(i)) * rest
        for i in I - J:
            rest = self.prod(self.c(self.e(j + 1)) for j in inter)
            total = total + self.c(self.e(i)) * second(sym.without(i)) * rest
        return total

    def square_factor(self, I: IndexSet, J: IndexSet) -> Sym:
        return self.prod(self.c(self.e(i + 1)) for i in I & J)


@dataclass(frozen=True)
class RelationSpec:
    id: str
    suite: str
    params: str  # none | j | r | I | IJ
    compare: str  # pair | kwhw | exact | kmhw
    build: Callable[..., Tuple[Sym, Sym]]
    corrections: Tuple[Reading, ...] = (EMPTY_SUM, LEFT_SCALAR)
    raw: bool = False
    note: str = ""


def _c_c(V, I, J):
    return V.c(I) * V.c(J), V.c_sum(I, J, V.c)


def _c_c1(V, I, J):
    return V.c(I) * V.c1(J), V.c_sum(I, J, V.c1)


def _c1_c1(V, I, J):
    rhs = V.tau0() * V.c1(I ^ J) * V.square_factor(I, J) + V.q2() * V.c(I) * V.c(J)
    return V.c1(I) * V.c1(J), rhs


def _t_t(V, I, J):
    rhs = V.t(I ^ J) * V.square_factor(I, J)
    if V.reading.tau_fix:
        rhs = V.tau_left() * rhs
    return V.t(I) * V.t(J), rhs


def _t_t1(V, I, J):
    return V.t(I) * V.t1(J), V.tau_left() * V.t1(I ^ J) * V.square_factor(I, J)


def _t1_t1(V, I, J):
    return V.t1(I) * V.t1(J), V.tau_left() * V.q2() * V.t(I ^ J) * V.square_factor(I, J)


def _c_t(V, I, J):
    return V.c(I) * V.t(J), V.c_sum(I, J, V.t)


def _c1_t(V, I, J):
    rhs = V.tau0() * V.t(I ^ J) * V.square_factor(I, J) + V.c_sum(I, J, V.t1)
    return V.c1(I) * V.t(J), rhs


def _c1_t1(V, I, J):
    rhs = V.tau0() * V.t1(I ^ J) * V.square_factor(I, J) + V.q2() * V.c_sum(I, J, V.t)
    return V.c1(I) * V.t1(J), rhs


def _c_empty(V):
    return V.c(IndexSet()), V.one()


def _tau0_fourth(V):
    return V.tau0() ** 4, V.c(V.e(2)) * V.tau_right() * V.tau_right()


def _tj_square(V, j):
    return V.tj(j) * V.tj(j), V.rho() * V.tj(j + 1) + V.xi_tau(j + 1)


def _s_square(V):
    return V.s() * V.s(), V.tau0() ** 2 * V.q2() * V.c(V.e(2)) * V.tau_right() * V.tau_right()


def _s_c1(V, I):
    rhs = V.tau0() ** 3 * V.q2() * V.c(I) + V.tau_left() * V.t1(I) * V.c(V.e(2))
    return V.s() * V.c1(I), rhs


def _t_s(V, I):
    return V.t(I) * V.s(), V.t1(I) * V.tau0() ** 3


def _t1_s(V, I):
    return V.t1(I) * V.s(), V.tau0() ** 3 * V.t(I) * V.q2()


def _kw_tau0_fourth(V):
    return V.tau0() ** 4, V.zero()


def _kw_s_square(V):
    return V.s() * V.s(), V.zero()


def _kw_s_tau0(V):
    return V.s() * V.tau0(), V.zero()


def _s_c(V, I):
    return V.s() * V.c(I), V.tau0() ** 3 * V.c1(I)


def _kw_s_c1(V, I):
    return V.s() * V.c1(I), V.rho() * V.tau0() ** 3 * (V.c1(V.e(2)) + V.tj(2)) * V.c(I)


def _hw_tau0_fourth(V):
    inner = V.xb(1) ** 2 * (V.tau0() ** 2 + V.rho() * V.tau_i(1)) + V.xbar_tau(2)
    rhs = V.rho() ** 3 * V.tau_i(2) + V.rho() ** 2 * inner + V.xb(1) ** 2 * V.tau_right() * V.tau_right()
    return V.tau0() ** 4, rhs


def _hw_tau0_fourth_expanded(V):
    rhs = (
        V.rho() ** 3 * (V.tau_i(2) + V.c1(V.e(2)))
        + V.rho() ** 2 * V.tau_left() * V.xb(2)
        + V.tau_left() * V.tau_left() * V.c(V.e(2))
    )
    return V.tau0() ** 4, rhs


def _kmhw_tau0_fourth(V):
    rhs = V.rho() ** 3 * (V.tau0() * V.xb(2) + V.tau_i(1) * V.xb(1) ** 2 + V.tau_i(2))
    return V.tau0() ** 4, rhs


def _kmhw_tr_square(V, r):
    tail = V.zero()
    for i in range(2, r + 2):
        tail = tail + V.xi(r + 1 - i) ** (2 ** i) * V.xb(i)
    rhs = (
        V.rho() * V.tau_i(r + 1)
        + V.xi(r) ** 2 * (V.tau0() ** 2 + V.rho() * V.tau_i(1))
        + V.rho() * V.tau0() * tail
    )
    return V.tau_i(r) ** 2, rhs


def _xi2_tau(V):
    rhs = V.tau_left() * V.xb(2) + V.tau0() ** 2 * V.c(V.e(2)) + V.rho() * V.c1(V.e(2))
    return V.xi_tau(2), rhs


def _xi2_tau_split(V):
    return V.xi_tau(2), V.xbar_tau(2) + V.xb(1) ** 2 * V.xbar_tau(1)


def _b_c1(V, I):
    return V.s() * V.c1(I), V.rho() * V.tau0() ** 3 * (V.c1(V.e(2)) + V.tau_i(2)) * V.c(I)


RELATIONS: Dict[str, RelationSpec] = {
    rel.id: rel
    for rel in [
        RelationSpec("c-c", "lemma-c", "IJ", "pair", _c_c),
        RelationSpec("c-c1", "lemma-c", "IJ", "pair", _c_c1),
        RelationSpec("c1-c1", "lemma-c", "IJ", "pair", _c1_c1),
        RelationSpec("t-t", "lemma-t", "IJ", "pair", _t_t, (TAU_FIX, EMPTY_SUM, LEFT_SCALAR),
                     note="printed right side is one tau short"),
        RelationSpec("t-t1", "lemma-t", "IJ", "pair", _t_t1),
        RelationSpec("t1-t1", "lemma-t", "IJ", "pair", _t1_t1),
        RelationSpec("c-t", "lemma-t", "IJ", "pair", _c_t),
        RelationSpec("c1-t", "lemma-t", "IJ", "pair", _c1_t),
        RelationSpec("c1-t1", "lemma-t", "IJ", "pair", _c1_t1),
        RelationSpec("c-empty", "main-theorem", "none", "pair", _c_empty,
                     note="generator convention; the defining sum is empty"),
        RelationSpec("tau0-4", "main-theorem", "none", "pair", _tau0_fourth),
        RelationSpec("tj-square", "main-theorem", "j", "pair", _tj_square),
        RelationSpec("s-square", "main-theorem", "none", "pair", _s_square),
        RelationSpec("s-c1", "main-theorem", "I", "pair", _s_c1),
        RelationSpec("t-s", "main-theorem", "I", "pair", _t_s),
        RelationSpec("t1-s", "main-theorem", "I", "pair", _t1_s),
        RelationSpec("kw-tau0-4", "kw-presentation", "none", "kwhw", _kw_tau0_fourth),
        RelationSpec("kw-tj-square", "kw-presentation", "j", "kwhw", _tj_square),
        RelationSpec("kw-s-square", "kw-presentation", "none", "kwhw", _kw_s_square),
        RelationSpec("kw-s-tau0", "kw-presentation", "none", "kwhw", _kw_s_tau0),
        RelationSpec("kw-s-c", "kw-presentation", "I", "kwhw", _s_c),
        RelationSpec("kw-s-c1", "kw-presentation", "I", "kwhw", _kw_s_c1),
        RelationSpec("hw-tau0-4", "kw-presentation", "none", "exact", _hw_tau0_fourth, raw=True),
        RelationSpec("hw-tau0-4-expanded", "kw-presentation", "none", "exact", _hw_tau0_fourth_expanded, raw=True),
        RelationSpec("kmhw-tau0-4", "kw-presentation", "none", "kmhw", _kmhw_tau0_fourth, raw=True),
        RelationSpec("kmhw-tr-square", "kw-presentation", "r", "kmhw", _kmhw_tr_square, raw=True),
        RelationSpec("xi2-tau", "kw-presentation", "none", "exact", _xi2_tau, raw=True),
        RelationSpec("b-c", "kw-presentation", "I", "kmhw", _s_c, raw=True),
        RelationSpec("b-c1", "kw-presentation", "I", "kmhw", _b_c1, raw=True),
        RelationSpec("xi2-tau-split", "subalgebra", "none", "exact", _xi2_tau_split, raw=True),
    ]
}


def relations_for(suite: str) -> List[RelationSpec]:
    return [rel for rel in RELATIONS.values() if rel.suite == suite]


def parameter_grid(rel: RelationSpec, max_index: int) -> List[Dict[str, object]]:
    sets = IndexSet.subsets(list(range(2, max_index + 1)))
    if rel.params == "IJ":
        return [{"I": I, "J": J} for I in sets for J in sets]
    if rel.params == "I":
        return [{"I": I} for I in sets]
    if rel.params == "j":
        return [{"j": j} for j in range(2, max_index + 1)]
    if rel.params == "r":
        return [{"r": r} for r in range(1, max_index + 1)]
    return [{}]


class RelationVerifier:
    """Evaluates printed relations, then the listed corrections when the printed form fails."""

    def __init__(self, pairs: PairModel):
        self.pairs = pairs
        self.shadows = pairs.shadows

    def _equal(self, compare: str, lhs, rhs) -> bool:
        if compare == "pair":
            return lhs == rhs
        if compare == "kwhw":
            return lhs.b == rhs.b
        if compare == "exact":
            return lhs == rhs
        if compare == "kmhw":
            diff = lhs + rhs
            return not diff or not self.shadows.to_kmhw(diff).terms
        raise InvalidArgument(f"unknown comparison {compare!r}")

    def _render(self, compare: str, value) -> str:
        if compare == "kwhw":
            return str(value.b)
        return str(value)

    def evaluate(self, rel: RelationSpec, reading: Reading, params: Dict[str, object]):
        V = Vocabulary(self.pairs, reading, raw=rel.raw)
        lhs, rhs = rel.build(V, **params)
        degrees = sorted(set(lhs.degrees) | set(rhs.degrees))
        homogeneous = len(degrees) <= 1
        holds = self._equal(rel.compare, lhs.value, rhs.value)
        return lhs, rhs, degrees, homogeneous, holds

    def verify(self, relation_id: str, **params) -> RelationCheck:
        rel = RELATIONS.get(relation_id)
        if rel is None:
            raise InvalidArgument(f"unknown relation {relation_id!r}")
        shown = {k: str(v) for k, v in params.items()}
        try:
            lhs, rhs, degrees, homogeneous, holds = self.evaluate(rel, PRINTED, params)
        except WsteenError as exc:
            return RelationCheck(relation=rel.id, params=shown, status="fails", detail=f"printed form: {exc}")
        check = RelationCheck(
            relation=rel.id,
            params=shown,
            status="holds" if holds and homogeneous else "fails",
            printed_degrees=[str(d) for d in degrees],
            homogeneous=homogeneous,
            lhs=self._render(rel.compare, lhs.value),
            rhs=self._render(rel.compare, rhs.value),
            detail=f"{lhs.text} = {rhs.text}",
        )
        if check.status == "holds":
            return check
        notes = []
        if not homogeneous:
            notes.append(f"printed form is inhomogeneous: {', '.join(check.printed_degrees)}")
        for reading in rel.corrections:
            try:
                c_lhs, c_rhs, _, c_homogeneous, c_holds = self.evaluate(rel, reading, params)
            except WsteenError as exc:
                notes.append(f"{reading.label}: {exc}")
                continue
            if c_holds and c_homogeneous:
                check.status = "fails-as-printed-holds-with-correction"
                check.correction = reading.label
                notes.append(f"{reading.label}: {c_lhs.text} = {c_rhs.text}")
                logger.warning("%s %s fails as printed, holds under %s", rel.id, shown, reading.label)
                break
            notes.append(f"{reading.label}: fails")
        if rel.note:
            notes.append(rel.note)
        check.detail = "; ".join([check.detail] + notes)
        return check


def verify_relation(pairs: PairModel, relation_id: str, I: Optional[IndexSet] = None, J: Optional[IndexSet] = None, **extra) -> RelationCheck:
    params: Dict[str, object] = dict(extra)
    if I is not None:
        params["I"] = I
    if J is not None:
        params["J"] = J
    return RelationVerifier(pairs).verify(relation_id, **params)


# --- degree audit ---


def _degree_of(x: AElement) -> Optional[Bidegree]:
    degrees = x.bidegrees()
    return degrees[0] if degrees else None


def degree_audit(pairs: PairModel, max_index: int = 4) -> List[Tuple[str, Bidegree, Bidegree]]:
    """(name, printed degree, degree of the generator's H F2 component) for the listed degrees.

    The printed |c(I)| and |c_1(I)| formulas are read with j = i - 1.
    """
    rows = [("t1", Bidegree(3, 0), _degree_of(pairs.theorem_generator("t1").a)),
            ("s", PRINTED_S_DEGREE, _degree_of(pairs.theorem_generator("s").a))]
    for i in range(2, max_index + 1):
        rows.append((f"t{i}", tau_degree(i), _degree_of(pairs.theorem_generator(f"t{i}").a)))
    for I in IndexSet.subsets(list(range(2, max_index + 1))):
        if I.is_empty:
            continue
        printed_c = ZERO
        printed_c1 = ZERO
        for i in I:
            printed_c = printed_c + Bidegree(2 ** (i + 1) - 4, 2 ** i - 2)
            printed_c1 = printed_c1 + Bidegree(2 ** (i + 1) - 1, 2 ** i - 1)
        rows.append((f"c({I})", printed_c, _degree_of(pairs.theorem_generator("c", I).a)))
        rows.append((f"c1({I})", printed_c1, _degree_of(pairs.theorem_generator("c1", I).a)))
        rows.append((f"t({I})", TAU + xi_set_degree(I), _degree_of(pairs.theorem_generator("t", I).a)))
        rows.append((f"t1({I})", Bidegree(3, 0) + xi_set_degree(I), _degree_of(pairs.theorem_generator("t1", I).a)))
    return rows


# --- linear independence of the claimed basis ---


class Candidate(NamedTuple):
    name: str
    value: AElement


class Shape(NamedTuple):
    """tau0^e s^eps t_J Y before the k^M[tau] coefficient."""

    label: str
    degree: Bidegree
    value: AElement


def _y_factors(pairs: PairModel, indices: Sequence[int]) -> List[Tuple[str, Bidegree, str, AElement]]:
    """1, c(K), c1(K), t(K) for K nonempty, t1(K) for all K."""
    out = [("1", ZERO, "one", pairs.A.one())]
    for K in IndexSet.subsets(list(indices)):
        if not K.is_empty:
            out.append((f"c({K})", xi_set_degree(K) - D_SHIFT, "c", pairs.theorem_generator("c", K).a))
            out.append((f"c1({K})", tau_degree(0) + xi_set_degree(K), "c1", pairs.theorem_generator("c1", K).a))
            out.append((f"t({K})", TAU + xi_set_degree(K), "t", pairs.theorem_generator("t", K).a))
        out.append((f"t1({K})", Bidegree(3, 0) + xi_set_degree(K), "t1", pairs.theorem_generator("t1", K).a))
    return out


def claimed_shapes(pairs: PairModel, max_index: int = 4) -> List[Shape]:
    """Reduced shapes: e <= 3; s only with e = 0 and Y in {1, c(K)}; tau0^3 never with c1(K) or t1(K)."""
    cached = pairs.shape_cache.get(max_index)
    if cached is not None:
        return cached
    A = pairs.A
    indices = [i for i in range(2, max_index + 1) if i <= A.gen_cap]
    factors = _y_factors(pairs, indices)
    shapes: List[Shape] = []
    for e in range(4):
        for eps in (0, 1):
            if eps and e:
                continue
            for J in IndexSet.subsets(indices):
                for y_name, y_degree, y_kind, y_value in factors:
                    if eps and y_kind not in ("one", "c"):
                        continue
                    if e == 3 and y_kind in ("c1", "t1"):
                        continue
                    w = tau_degree(0).scale(e) + B_DEGREE.scale(eps) + y_degree
                    value = A.power(A.tau_i(0), e) * y_value
                    for j in J:
                        w = w + tau_degree(j)
                        value = A.tau_i(j) * value
                    if eps:
                        value = pairs.kwhw.b_lift * value
                    label = "*".join(
                        [f"t0^{e}"] * bool(e) + ["s"] * eps + [f"t{j}" for j in J] + [y_name] * (y_name != "1")
                    ) or "1"
                    shapes.append(Shape(label, w, value))
    pairs.shape_cache[max_index] = shapes
    return shapes


def claimed_bidegrees(pairs: PairModel, weight_cap: int, max_index: int = 4) -> List[Bidegree]:
    """Bidegrees reached by a shape of weight <= weight_cap times rho^d tau^m, m <= 1."""
    found = set()
    top = max((d for d in range(0, 4) if pairs.A.km.basis(d)), default=0)
    for shape in claimed_shapes(pairs, max_index):
        if shape.degree.q > weight_cap:
            continue
        for d in range(top + 1):
            if not pairs.A.km.basis(d):
                continue
            for m in (0, 1):
                found.add(Bidegree(shape.degree.p - d, shape.degree.q - d - m))
    return sorted(found, key=lambda b: (b.q, b.p))


def independence_candidates(pairs: PairModel, b: Bidegree, max_index: int = 4) -> List[Candidate]:
    """k^M[tau]-multiples of the claimed shapes landing in b."""
    A, sh = pairs.A, pairs.shadows
    out: List[Candidate] = []
    for shape in claimed_shapes(pairs, max_index):
        d = shape.degree.p - b.p
        m = shape.degree.q - d - b.q
        if d < 0 or m < 0:
            continue
        for c in A.km.basis(d):
            scalar = sh.scalar(c, m)
            if c == A.km.one and not m:
                name = shape.label
            else:
                name = f"{A.format_monomial(scalar.monomials()[0])}*{shape.label}"
            out.append(Candidate(name, scalar * shape.value))
    return out


def independence_check(pairs: PairModel, b: Bidegree, max_index: int = 4) -> IndependenceReport:
    """Rank of the claimed basis at b through the H F2 component of the pair model."""
    A = pairs.A
    candidates = independence_candidates(pairs, b, max_index)
    rows = {m: i for i, m in enumerate(A.basis(b))}
    matrix = zeros(len(rows), len(candidates))
    for j, cand in enumerate(candidates):
        for m in cand.value.terms:
            matrix[rows[m], j] = 1
    rank = gf2_rank(matrix) if candidates else 0
    return IndependenceReport(
        bidegree=str(b),
        candidates=[c.name for c in candidates],
        rank=rank,
        independent=rank == len(candidates),
    )
