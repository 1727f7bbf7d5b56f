"""Subquotients of A that carry the Witt-theoretic information.

* H F2_** H_W Z: the subalgebra of A generated over k^M[tau] by tau_i,
  (xi-bar_1 tau), xi-bar_1^2 and xi-bar_i (i >= 2); membership is decided by a
  linear solve per bidegree.
* H F2_** k^M = A / (tau + rho tau_0)A, with the tau-free monomials as transversal.
* k^M_** H_W Z = H F2_** H_W Z / tau, expanded in the monomials
  tau_0^{E_0} tau(E) xi-bar(R) with E_0 <= 3 and an even xi-bar_1 exponent.
* H F2_** K^W, presented by tau(E) xi-bar(R) with an even xi-bar_1 exponent.

Both Sq2-derivations are defined on lifts and checked for lift independence.

Here "xi-bar_1 tau" always means xi-bar_1 * eta_R(tau) = (tau + rho tau_0) xi-bar_1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from wsteen.models.errors import LiftDependence, MalformedIndexSet, NotInSubalgebra
from wsteen.models.gf2 import GF2Solver, gf2_rank, zeros
from wsteen.models.grading import (
    TAU,
    Bidegree,
    GradedGenerator,
    tau_degree,
    words_of_degree,
    xi_degree,
)
from wsteen.models.milnor_dual import AElement, AMonomial, DualSteenrod, Side, SteenrodOp, trim

logger = logging.getLogger(__name__)


# --- index sets ---


class IndexSet:
    """A finite set of integers >= 2, stored as a bit set."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0 or bits & 0b11:
            raise MalformedIndexSet("index sets start at index 2")
        self.bits = bits

    @classmethod
    def of(cls, indices: Iterable[int] = ()) -> "IndexSet":
        bits = 0
        for i in indices:
            if i < 2:
                raise MalformedIndexSet(f"index {i} is below 2")
            bits |= 1 << i
        return cls(bits)

    @classmethod
    def e(cls, i: int) -> "IndexSet":
        return cls.of([i])

    @classmethod
    def parse(cls, text: str) -> "IndexSet":
        body = text.strip().strip("{}")
        if not body.strip():
            return cls()
        try:
            return cls.of(int(part) for part in body.split(","))
        except ValueError as exc:
            raise MalformedIndexSet(f"cannot read index set {text!r}") from exc

    @classmethod
    def subsets(cls, indices: Sequence[int]) -> List["IndexSet"]:
        out = []
        for mask in range(2 ** len(indices)):
            out.append(cls.of(indices[k] for k in range(len(indices)) if mask >> k & 1))
        return out

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, i: int) -> bool:
        return i >= 0 and bool(self.bits >> i & 1)

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.bits | other.bits)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.bits & other.bits)

    def __xor__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.bits ^ other.bits)

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.bits & ~other.bits)

    def disjoint_union(self, other: "IndexSet") -> "IndexSet":
        if self.bits & other.bits:
            raise MalformedIndexSet(f"{self} and {other} overlap")
        return IndexSet(self.bits | other.bits)

    def with_index(self, i: int) -> "IndexSet":
        return self.disjoint_union(IndexSet.e(i))

    def without(self, i: int) -> "IndexSet":
        return IndexSet(self.bits & ~(1 << i))

    def shifted(self, k: int) -> "IndexSet":
        return IndexSet.of(i + k for i in self)

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def max_index(self) -> int:
        return self.bits.bit_length() - 1 if self.bits else 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IndexSet) and other.bits == self.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __lt__(self, other: "IndexSet") -> bool:
        return self.bits < other.bits

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self) + "}"

    def __repr__(self) -> str:
        return f"IndexSet({self})"


# --- basis keys ---


class HWKey(NamedTuple):
    """c * tau^tpow * tau(E) * (xi-bar_1 tau)^eps * xi-bar(Rbar), Rbar[0] even."""

    c: Tuple[int, ...]
    tpow: int
    E: Tuple[int, ...]
    eps: int
    Rbar: Tuple[int, ...]


class KMKey(NamedTuple):
    """c * tau_0^E[0] * tau(E[1:]) * xi-bar(Rbar); E[0] <= 3, Rbar[0] even."""

    c: Tuple[int, ...]
    E: Tuple[int, ...]
    Rbar: Tuple[int, ...]


class HKWKey(NamedTuple):
    """c * tau(E) * xi-bar(Rbar), Rbar[0] even; a generator of H F2_** K^W."""

    c: Tuple[int, ...]
    E: Tuple[int, ...]
    Rbar: Tuple[int, ...]


class SpanSolver:
    """Coordinates of homogeneous elements of A against a list of labelled images."""

    def __init__(self, algebra: DualSteenrod, b: Bidegree, labels: Sequence, images: Sequence[AElement]):
        self.bidegree = b
        self.labels = tuple(labels)
        self.rows = {m: i for i, m in enumerate(algebra.basis(b))}
        matrix = zeros(len(self.rows), len(self.labels))
        for j, img in enumerate(images):
            for m in img.terms:
                matrix[self.rows[m], j] = 1
        self.matrix = matrix
        self.solver = GF2Solver(matrix)

    @property
    def independent(self) -> bool:
        return self.solver.rank == len(self.labels)

    def vector(self, x: AElement) -> np.ndarray:
        vec = np.zeros(len(self.rows), dtype=np.uint8)
        for m in x.terms:
            vec[self.rows[m]] ^= 1
        return vec

    def coordinates(self, x: AElement) -> Optional[List]:
        solution = self.solver.solve(self.vector(x))
        if solution is None:
            return None
        return [label for label, bit in zip(self.labels, solution) if bit]


class LiftCheck:
    """Decides when to re-evaluate a quotient map on a second lift."""

    def __init__(self, mode: str = "sampled", rate: int = 16):
        if mode not in ("always", "sampled", "never"):
            raise ValueError(f"unknown lift-check mode {mode!r}")
        self.mode = mode
        self.rate = max(rate, 1)
        self._calls = 0

    def due(self) -> bool:
        self._calls += 1
        if self.mode == "always":
            return True
        if self.mode == "never":
            return False
        return self._calls % self.rate == 1


# --- elements ---


@dataclass(frozen=True)
class HWElement:
    """An element of the subalgebra together with its expansion in the HW basis."""

    shadows: "ShadowModules"
    element: AElement
    certificate: FrozenSet[HWKey]

    def reexpand(self) -> AElement:
        total = self.element.algebra.zero()
        for key in self.certificate:
            total = total + self.shadows.hw_image(key)
        return total

    def __str__(self) -> str:
        return str(self.element)


@dataclass(frozen=True)
class HKMElement:
    """Class in A/(tau + rho tau_0)A, stored by its tau-free representative."""

    shadows: "ShadowModules"
    rep: AElement

    def __add__(self, other: "HKMElement") -> "HKMElement":
        return HKMElement(self.shadows, self.rep + other.rep)

    def __mul__(self, other: "HKMElement") -> "HKMElement":
        return self.shadows.to_hkm(self.rep * other.rep)

    def __bool__(self) -> bool:
        return bool(self.rep)

    def __str__(self) -> str:
        return str(self.rep)


@dataclass(frozen=True)
class KMHWElement:
    """Class in k^M_** H_W Z as a set of basis keys."""

    shadows: "ShadowModules"
    terms: FrozenSet[KMKey]

    def __add__(self, other: "KMHWElement") -> "KMHWElement":
        return KMHWElement(self.shadows, self.terms ^ other.terms)

    def __mul__(self, other: "KMHWElement") -> "KMHWElement":
        return self.shadows.kmhw_mul(self, other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def lift(self) -> AElement:
        total = self.shadows.A.zero()
        for key in self.terms:
            total = total + self.shadows.kmhw_image(key)
        return total

    def keys(self) -> List[KMKey]:
        return sorted(self.terms, key=self.shadows.kmhw_sort_key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(self.shadows.format_kmhw_key(k) for k in self.keys())


# --- the modules ---


class ShadowModules:
    """All four shadow modules over one algebra, with per-bidegree solver caches."""

    def __init__(self, algebra: DualSteenrod, lift_check: Optional[LiftCheck] = None):
        self.A = algebra
        self.preset = algebra.preset
        self.lift_check = lift_check or LiftCheck()
        cap = algebra.gen_cap
        self._cap = cap
        self._xi_bar_monomials: Dict[Tuple[int, ...], AElement] = {}
        self._tau_products: Dict[Tuple[int, ...], AElement] = {}
        self._hw_images: Dict[HWKey, AElement] = {}
        self._km_images: Dict[KMKey, AElement] = {}
        self._hw_solvers: Dict[Bidegree, SpanSolver] = {}
        self._km_solvers: Dict[Bidegree, SpanSolver] = {}
        self.xi_bar_tau = algebra.eta_right_tau * algebra.xi_bar(1)

        gens_tau = [GradedGenerator("tau", TAU)]
        gens_t = [GradedGenerator(f"t{i}", tau_degree(i), 1) for i in range(cap + 1)]
        gens_xb = [GradedGenerator("xb1^2", xi_degree(1).scale(2))] + [
            GradedGenerator(f"xb{i}", xi_degree(i)) for i in range(2, cap + 1)
        ]
        self._hw_gens = gens_tau + gens_t + [GradedGenerator("(xb1*tau)", Bidegree(2, 0), 1)] + gens_xb
        t0 = GradedGenerator("t0", tau_degree(0), 3)
        self._km_gens_tau = gens_tau + [t0] + gens_t[1:] + gens_xb
        self._km_gens = [t0] + gens_t[1:] + gens_xb
        self._hkw_gens = gens_t + gens_xb

    # --- building blocks ---

    def xi_bar_monomial(self, Rbar: Sequence[int]) -> AElement:
        Rbar = trim(Rbar)
        cached = self._xi_bar_monomials.get(Rbar)
        if cached is None:
            cached = self.A.one()
            for i, r in enumerate(Rbar, start=1):
                if r:
                    cached = cached * self.A.power(self.A.xi_bar(i), r)
            self._xi_bar_monomials[Rbar] = cached
        return cached

    def tau_product(self, E: Sequence[int]) -> AElement:
        E = trim(E)
        cached = self._tau_products.get(E)
        if cached is None:
            cached = self.A.one()
            for i, e in enumerate(E):
                if e:
                    cached = cached * self.A.power(self.A.tau_i(i), e)
            self._tau_products[E] = cached
        return cached

    def xi_bar_set(self, I: IndexSet) -> AElement:
        R = [0] * max(I.max_index, 1)
        for i in I:
            R[i - 1] = 1
        return self.xi_bar_monomial(R)

    def c_element(self, I: IndexSet) -> AElement:
        """sum over i in I of xi-bar_{i-1}^2 xi-bar(I - i); zero for the empty set."""
        total = self.A.zero()
        for i in I:
            total = total + self.A.power(self.A.xi_bar(i - 1), 2) * self.xi_bar_set(I.without(i))
        return total

    def c1_element(self, I: IndexSet) -> AElement:
        return self.A.tau_i(0) * self.xi_bar_set(I) + self.A.tau_i(1) * self.c_element(I)

    def scalar(self, c: Tuple[int, ...], tpow: int = 0) -> AElement:
        return self.A.element([AMonomial(c, tpow, (), ())])

    # --- H F2_** H_W Z ---

    def hw_image(self, key: HWKey) -> AElement:
        cached = self._hw_images.get(key)
        if cached is None:
            cached = self.scalar(key.c, key.tpow) * self.tau_product(key.E) * self.xi_bar_monomial(key.Rbar)
            if key.eps:
                cached = cached * self.xi_bar_tau
            self._hw_images[key] = cached
        return cached

    def hw_keys(self, b: Bidegree) -> List[HWKey]:
        self.A.check_window(b)
        n_t = self._cap + 1
        keys = []
        for word, d in words_of_degree(self._hw_gens, b):
            tpow = word[0]
            E = trim(word[1:1 + n_t])
            eps = word[1 + n_t]
            Rbar = trim((2 * word[2 + n_t],) + tuple(word[3 + n_t:]))
            for c in self.A.km.basis(d):
                keys.append(HWKey(c, tpow, E, eps, Rbar))
        return sorted(keys, key=lambda k: (k.c, k.tpow, k.E, k.eps, k.Rbar))

    def hw_solver(self, b: Bidegree) -> SpanSolver:
        solver = self._hw_solvers.get(b)
        if solver is None:
            keys = self.hw_keys(b)
            solver = SpanSolver(self.A, b, keys, [self.hw_image(k) for k in keys])
            logger.debug("HW solver %s: %d keys, rank %d", b, len(keys), solver.solver.rank)
            self._hw_solvers[b] = solver
        return solver

    def hw_expand(self, x: AElement) -> HWElement:
        certificate: set = set()
        for b, part in x.components().items():
            coords = self.hw_solver(b).coordinates(part)
            if coords is None:
                raise NotInSubalgebra(b, part)
            certificate.update(coords)
        return HWElement(self, x, frozenset(certificate))

    def in_hw(self, x: AElement) -> bool:
        try:
            self.hw_expand(x)
        except NotInSubalgebra:
            return False
        return True

    def right_basis_matrix(self, b: Bidegree) -> Tuple[List[HWKey], np.ndarray]:
        """Columns: the right-module basis c*tau(E)*...*eta_R(tau)^n expanded in the left basis."""
        keys = self.hw_keys(b)
        index = {k: j for j, k in enumerate(keys)}
        matrix = zeros(len(keys), len(keys))
        for j, key in enumerate(keys):
            image = self.hw_image(key._replace(tpow=0)) * self.A.power(self.A.eta_right_tau, key.tpow)
            for coord in self.hw_expand(image).certificate:
                matrix[index[coord], j] = 1
        return keys, matrix

    # --- H F2_** k^M ---

    def to_hkm(self, x: AElement) -> HKMElement:
        """Reduce modulo (tau + rho tau_0)A onto the tau-free monomials.

        tau is replaced by rho tau_0 until no tau is left. Each class has exactly one
        tau-free member: any other member carries tau times the top tau power of its
        (tau + rho tau_0) multiple. That member is the class minimum when the order
        ranks by tau power before (bidegree, c, E, R).
        """
        out: set = set()
        rho = self.A.km.rho
        rho_tau0 = None if rho is None else AMonomial(rho, 0, (1,), ())
        pending = list(x.terms)
        while pending:
            m = pending.pop()
            if m.tpow == 0:
                out ^= {m}
                continue
            if rho_tau0 is None:
                continue
            pending.extend(self.A.mul_monomials(m._replace(tpow=m.tpow - 1), rho_tau0))
        return HKMElement(self, AElement(self.A, frozenset(out)))

    def hkm_basis(self, b: Bidegree) -> List[AMonomial]:
        return [m for m in self.A.basis(b) if m.tpow == 0]

    def d_right(self, x: HKMElement) -> HKMElement:
        result = self.to_hkm(self.A.act(SteenrodOp.SQ2, Side.RIGHT, x.rep))
        if x.rep and self.lift_check.due():
            self._check_right_lift(x, result)
        return result

    def _check_right_lift(self, x: HKMElement, result: HKMElement) -> None:
        for b, part in x.rep.components().items():
            shifted = self.A.basis(b - TAU)
            if not shifted:
                continue
            other = part + self.A.element([shifted[0]]) * self.A.eta_right_tau
            again = self.to_hkm(self.A.act(SteenrodOp.SQ2, Side.RIGHT, other))
            expected = self.to_hkm(self.A.act(SteenrodOp.SQ2, Side.RIGHT, part))
            if again.rep != expected.rep:
                raise LiftDependence("d_right", f"lifts {part} and {other} disagree")

    # --- k^M_** H_W Z ---

    def kmhw_image(self, key: KMKey) -> AElement:
        cached = self._km_images.get(key)
        if cached is None:
            cached = self.scalar(key.c) * self.tau_product(key.E) * self.xi_bar_monomial(key.Rbar)
            self._km_images[key] = cached
        return cached

    def kmhw_sort_key(self, key: KMKey):
        return (key.c, key.E, key.Rbar)

    def _km_words(self, gens, b: Bidegree):
        self.A.check_window(b)
        return words_of_degree(gens, b)

    def kmhw_basis(self, b: Bidegree) -> List[KMKey]:
        n_t = self._cap + 1
        keys = []
        for word, d in self._km_words(self._km_gens, b):
            E = trim(word[:n_t])
            Rbar = trim((2 * word[n_t],) + tuple(word[n_t + 1:]))
            for c in self.A.km.basis(d):
                keys.append(KMKey(c, E, Rbar))
        return sorted(keys, key=self.kmhw_sort_key)

    def kmhw_solver(self, b: Bidegree) -> SpanSolver:
        """Solver over the k^M[tau]-basis tau^n * (key images) of H F2_** H_W Z at b."""
        solver = self._km_solvers.get(b)
        if solver is None:
            n_t = self._cap + 1
            labels, images = [], []
            for word, d in self._km_words(self._km_gens_tau, b):
                tpow = word[0]
                E = trim(word[1:1 + n_t])
                Rbar = trim((2 * word[1 + n_t],) + tuple(word[2 + n_t:]))
                for c in self.A.km.basis(d):
                    key = KMKey(c, E, Rbar)
                    labels.append((key, tpow))
                    images.append(self.A.tau(tpow) * self.kmhw_image(key) if tpow else self.kmhw_image(key))
            solver = SpanSolver(self.A, b, labels, images)
            logger.debug("k^M H_W solver %s: %d labels, rank %d", b, len(labels), solver.solver.rank)
            self._km_solvers[b] = solver
        return solver

    def to_kmhw(self, x) -> KMHWElement:
        """Class modulo tau * H F2_** H_W Z; accepts an AElement or an HWElement."""
        element = x.element if isinstance(x, HWElement) else x
        terms: set = set()
        for b, part in element.components().items():
            coords = self.kmhw_solver(b).coordinates(part)
            if coords is None:
                raise NotInSubalgebra(b, part)
            terms.update(key for key, tpow in coords if tpow == 0)
        return KMHWElement(self, frozenset(terms))

    def kmhw_element(self, keys: Iterable[KMKey]) -> KMHWElement:
        terms: set = set()
        for key in keys:
            terms ^= {key}
        return KMHWElement(self, frozenset(terms))

    def kmhw_mul(self, x: KMHWElement, y: KMHWElement) -> KMHWElement:
        return self.to_kmhw(x.lift() * y.lift())

    def d_left(self, x: KMHWElement) -> KMHWElement:
        lift = x.lift()
        result = self.to_kmhw(self.A.act(SteenrodOp.SQ2, Side.LEFT, lift))
        if x.terms and self.lift_check.due():
            self._check_left_lift(lift, result)
        return result

    def leibniz_defect(self, x: KMHWElement, y: KMHWElement) -> KMHWElement:
        """d_left(xy) + d_left(x) y + x d_left(y); the tau Sq1 Sq1 term of the Cartan formula dies mod tau."""
        return self.d_left(x * y) + self.d_left(x) * y + x * self.d_left(y)

    def _check_left_lift(self, lift: AElement, result: KMHWElement) -> None:
        for b, part in lift.components().items():
            keys = self.hw_keys(b - TAU)
            if not keys:
                continue
            other = lift + self.A.tau() * self.hw_image(keys[0])
            again = self.to_kmhw(self.A.act(SteenrodOp.SQ2, Side.LEFT, other))
            if again.terms != result.terms:
                raise LiftDependence("d_left", f"lifts {lift} and {other} disagree")

    # --- H F2_** K^W ---

    def hkw_presentation_basis(self, b: Bidegree) -> List[HKWKey]:
        n_t = self._cap + 1
        keys = []
        for word, d in self._km_words(self._hkw_gens, b):
            E = trim(word[:n_t])
            Rbar = trim((2 * word[n_t],) + tuple(word[n_t + 1:]))
            for c in self.A.km.basis(d):
                keys.append(HKWKey(c, E, Rbar))
        return sorted(keys)

    def hkw_image(self, key: HKWKey) -> HKMElement:
        return self.to_hkm(self.scalar(key.c) * self.tau_product(key.E) * self.xi_bar_monomial(key.Rbar))

    def hkw_rank(self, b: Bidegree) -> int:
        """Rank of the presentation monomials inside H F2_** k^M at b."""
        rows = {m: i for i, m in enumerate(self.hkm_basis(b))}
        keys = self.hkw_presentation_basis(b)
        matrix = zeros(len(rows), len(keys))
        for j, key in enumerate(keys):
            for m in self.hkw_image(key).rep.terms:
                matrix[rows[m], j] = 1
        return gf2_rank(matrix)

    # --- formatting ---

    def _format_parts(self, c, E, Rbar, tpow: int = 0, eps: int = 0) -> str:
        parts = []
        if any(c):
            parts.append(self.A.km.name(c))
        if tpow:
            parts.append("tau" if tpow == 1 else f"tau^{tpow}")
        for i, e in enumerate(E):
            if e == 1:
                parts.append(f"t{i}")
            elif e > 1:
                parts.append(f"t{i}^{e}")
        if eps:
            parts.append("(tau+rho*t0)*xb1")
        for i, r in enumerate(Rbar, start=1):
            if r == 1:
                parts.append(f"xb{i}")
            elif r > 1:
                parts.append(f"xb{i}^{r}")
        return "*".join(parts) if parts else "1"

    def format_hw_key(self, key: HWKey) -> str:
        return self._format_parts(key.c, key.E, key.Rbar, key.tpow, key.eps)

    def format_kmhw_key(self, key: KMKey) -> str:
        return self._format_parts(key.c, key.E, key.Rbar)

    def format_hkw_key(self, key: HKWKey) -> str:
        return self._format_parts(key.c, key.E, key.Rbar)
