"""The mod-2 dual motivic Steenrod algebra A over a field preset.

Elements are sparse F2 sums of monomials c * tau^n * tau(E) * xi(R) where c is
a k^M monomial, tau the weight (0,-1) class, E a binary exponent vector on
tau_0, tau_1, ... and R an exponent vector on xi_1, xi_2, ....  The only
relation besides commutativity and the k^M relations is

    tau_i^2 = rho*tau_{i+1} + tau*xi_{i+1} + rho*tau_0*xi_{i+1}.

The coproduct lands in A (x)_{k^M[tau]} A; tensors are kept with every
coefficient transported to the right-most factor, so that two tensors are
equal exactly when their term sets agree.
"""

from __future__ import annotations

import logging
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple

from wsteen.models.errors import GeneratorCapExceeded, InvalidArgument, PresetMismatch
from wsteen.models.field_data import FieldPreset, KM2Element, MilnorKRing, milnor_k
from wsteen.models.grading import (
    TAU,
    Bidegree,
    GradedGenerator,
    km_degree,
    tau_degree,
    words_of_degree,
    xi_degree,
)

logger = logging.getLogger(__name__)

DEFAULT_GEN_CAP = 6
# bump when the canonical monomial order changes; part of every cache key
MONOMIAL_ORDER_VERSION = 1


class SteenrodOp(str, Enum):
    SQ1 = "Sq1"
    SQ2 = "Sq2"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class AMonomial(NamedTuple):
    """c * tau^tpow * tau(E) * xi(R); R[0] is the exponent of xi_1."""

    c: Tuple[int, ...]
    tpow: int
    E: Tuple[int, ...]
    R: Tuple[int, ...]


def trim(seq: Iterable[int]) -> Tuple[int, ...]:
    out = list(seq)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def add_vectors(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    n = max(len(a), len(b))
    return trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def unit_vector(i: int, k: int = 1) -> Tuple[int, ...]:
    return (0,) * i + (k,)


# --- elements ---


class AElement:
    """An F2 sum of normal-form monomials; immutable."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "DualSteenrod", terms: FrozenSet[AMonomial] = frozenset()):
        self.algebra = algebra
        self.terms = terms

    def _check(self, other: "AElement") -> None:
        if self.algebra is not other.algebra:
            raise PresetMismatch(str(self.algebra), str(other.algebra))

    def __add__(self, other: "AElement") -> "AElement":
        self._check(other)
        return AElement(self.algebra, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "AElement") -> "AElement":
        return self.algebra.mul(self, other)

    def __pow__(self, k: int) -> "AElement":
        return self.algebra.power(self, k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> List[AMonomial]:
        return sorted(self.terms, key=self.algebra.sort_key)

    def bidegrees(self) -> List[Bidegree]:
        return sorted({self.algebra.bidegree(m) for m in self.terms})

    def components(self) -> Dict[Bidegree, "AElement"]:
        parts: Dict[Bidegree, set] = {}
        for m in self.terms:
            parts.setdefault(self.algebra.bidegree(m), set()).add(m)
        return {b: AElement(self.algebra, frozenset(ms)) for b, ms in sorted(parts.items())}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def is_scalar(self) -> bool:
        return all(not m.E and not m.R for m in self.terms)

    def __str__(self) -> str:
        return self.algebra.format(self)

    def __repr__(self) -> str:
        return f"AElement({self.algebra.format(self)})"


class TensorElement:
    """An F2 sum of tuples of monomials; all coefficients sit in the last factor."""

    __slots__ = ("algebra", "terms", "arity")

    def __init__(self, algebra: "DualSteenrod", terms: FrozenSet[Tuple[AMonomial, ...]], arity: int = 2):
        self.algebra = algebra
        self.terms = terms
        self.arity = arity

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.algebra, self.terms ^ other.terms, self.arity)

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        return self.algebra.tensor_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.algebra is other.algebra and self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        fmt = self.algebra.format_monomial
        rows = sorted(self.terms, key=lambda t: tuple(self.algebra.sort_key(m) for m in t))
        return " + ".join(" (x) ".join(fmt(m) for m in t) for t in rows)


# --- the algebra ---


class DualSteenrod:
    """Structure maps of A = H F2_** H F2 over one preset, truncated at ``gen_cap``."""

    def __init__(self, preset: FieldPreset, gen_cap: int = DEFAULT_GEN_CAP):
        if gen_cap < 1:
            raise InvalidArgument("generator cap must be at least 1")
        self.preset = preset
        self.gen_cap = gen_cap
        self.km: MilnorKRing = milnor_k(preset)
        self._one_c = self.km.one
        self._rho = self.km.rho
        self._degree_cache: Dict[AMonomial, Bidegree] = {}
        self._mul_cache: Dict[Tuple[AMonomial, AMonomial], FrozenSet[AMonomial]] = {}
        self._basis_cache: Dict[Bidegree, Tuple[AMonomial, ...]] = {}
        self._conj_gen: Dict[Tuple[str, int], AElement] = {}
        self._conj_cache: Dict[AMonomial, AElement] = {}
        self._delta_pure: Dict[AMonomial, TensorElement] = {}
        self._delta_cache: Dict[AMonomial, FrozenSet[Tuple[AMonomial, AMonomial]]] = {}
        self._check_relation_homogeneity()
        self.unit_monomial = AMonomial(self._one_c, 0, (), ())
        self.eta_right_tau = self.tau() + self.rho() * self.tau_i(0)

    def __str__(self) -> str:
        return f"A[{self.preset.name}]"

    def _check_relation_homogeneity(self) -> None:
        rho = km_degree(1)
        for i in range(self.gen_cap):
            lhs = tau_degree(i).scale(2)
            rhs = [
                rho + tau_degree(i + 1),
                TAU + xi_degree(i + 1),
                rho + tau_degree(0) + xi_degree(i + 1),
            ]
            if any(term != lhs for term in rhs):
                raise AssertionError(f"defining relation for tau_{i}^2 is inhomogeneous")

    # --- constructors ---

    def element(self, monomials: Iterable[AMonomial]) -> AElement:
        terms: set = set()
        for m in monomials:
            terms ^= {m}
        return AElement(self, frozenset(terms))

    def zero(self) -> AElement:
        return AElement(self)

    def one(self) -> AElement:
        return AElement(self, frozenset({self.unit_monomial}))

    def tau(self, power: int = 1) -> AElement:
        return self.element([AMonomial(self._one_c, power, (), ())])

    def rho(self) -> AElement:
        if self._rho is None:
            return self.zero()
        return self.element([AMonomial(self._rho, 0, (), ())])

    def km_class(self, name: str) -> AElement:
        m = self.km.generator(name)
        if name != "rho" and name not in self.km.classes:
            raise InvalidArgument(f"{self.preset.name} has no class {name!r}")
        return self.zero() if m is None else self.element([AMonomial(m, 0, (), ())])

    def coefficient(self, value: KM2Element) -> AElement:
        if value.preset != self.preset:
            raise PresetMismatch(value.preset.name, self.preset.name)
        return self.element(AMonomial(c, 0, (), ()) for c in value.terms)

    def tau_i(self, i: int) -> AElement:
        self._check_index(i, "tau")
        return self.element([AMonomial(self._one_c, 0, unit_vector(i), ())])

    def xi(self, i: int) -> AElement:
        if i < 1:
            raise InvalidArgument("xi_i needs i >= 1")
        self._check_index(i, "xi")
        return self.element([AMonomial(self._one_c, 0, (), unit_vector(i - 1))])

    def xi_bar(self, i: int) -> AElement:
        return self.conjugate(self.xi(i))

    def pure(self, E: Sequence[int] = (), R: Sequence[int] = ()) -> AMonomial:
        return AMonomial(self._one_c, 0, trim(E), trim(R))

    def _check_index(self, i: int, what: str) -> None:
        if i > self.gen_cap:
            raise GeneratorCapExceeded(i, self.gen_cap, what)

    # --- degrees and order ---

    def bidegree(self, m: AMonomial) -> Bidegree:
        cached = self._degree_cache.get(m)
        if cached is None:
            d = sum(m.c)
            p = -d
            q = -d - m.tpow
            for i, e in enumerate(m.E):
                if e:
                    p += e * (2 ** (i + 1) - 1)
                    q += e * (2 ** i - 1)
            for i, r in enumerate(m.R, start=1):
                if r:
                    p += r * (2 ** (i + 1) - 2)
                    q += r * (2 ** i - 1)
            cached = Bidegree(p, q)
            self._degree_cache[m] = cached
        return cached

    def sort_key(self, m: AMonomial):
        return (self.bidegree(m), m.c, m.tpow, m.E, m.R)

    def is_pure(self, m: AMonomial) -> bool:
        return m.c == self._one_c and m.tpow == 0

    def pure_part(self, m: AMonomial) -> AMonomial:
        return AMonomial(self._one_c, 0, m.E, m.R)

    def scalar_part(self, m: AMonomial) -> AMonomial:
        return AMonomial(m.c, m.tpow, (), ())

    def weight(self, m: AMonomial) -> int:
        """Weight of the pure part tau(E)xi(R)."""
        return self.bidegree(self.pure_part(m)).q

    # --- normal form and products ---

    def normal_form(self, raw: Iterable[Tuple[Tuple[int, ...], int, Sequence[int], Sequence[int]]]) -> AElement:
        """Reduce raw monomials (any tau_i exponents) to normal form."""
        out: set = set()
        pending = [
            (tuple(c), tpow, trim(E), trim(R)) for c, tpow, E, R in raw
        ]
        while pending:
            c, tpow, E, R = pending.pop()
            if self.km.is_zero(c):
                continue
            high = next((i for i in range(len(E) - 1, -1, -1) if E[i] >= 2), None)
            if high is None:
                out ^= {AMonomial(c, tpow, E, R)}
                continue
            if high + 1 > self.gen_cap:
                raise GeneratorCapExceeded(high + 1, self.gen_cap, "tau")
            lowered = list(E)
            lowered[high] -= 2
            # tau_i^2 -> tau*xi_{i+1}
            pending.append((c, tpow + 1, trim(lowered), add_vectors(R, unit_vector(high))))
            if self._rho is None:
                continue
            crho = self.km.mul(c, self._rho)
            if crho is None:
                continue
            # -> rho*tau_{i+1}
            pending.append((crho, tpow, add_vectors(lowered, unit_vector(high + 1)), R))
            # -> rho*tau_0*xi_{i+1}
            pending.append(
                (crho, tpow, add_vectors(lowered, unit_vector(0)), add_vectors(R, unit_vector(high)))
            )
        return AElement(self, frozenset(out))

    def mul_monomials(self, a: AMonomial, b: AMonomial) -> FrozenSet[AMonomial]:
        key = (a, b) if a <= b else (b, a)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        c = self.km.mul(a.c, b.c)
        if c is None:
            result: FrozenSet[AMonomial] = frozenset()
        else:
            E = add_vectors(a.E, b.E)
            R = add_vectors(a.R, b.R)
            if all(e <= 1 for e in E):
                result = frozenset({AMonomial(c, a.tpow + b.tpow, E, R)})
            else:
                result = self.normal_form([(c, a.tpow + b.tpow, E, R)]).terms
        self._mul_cache[key] = result
        return result

    def mul(self, x: AElement, y: AElement) -> AElement:
        x._check(y)
        terms: set = set()
        for a in x.terms:
            for b in y.terms:
                terms.symmetric_difference_update(self.mul_monomials(a, b))
        return AElement(self, frozenset(terms))

    def power(self, x: AElement, k: int) -> AElement:
        if k < 0:
            raise InvalidArgument("negative powers are not defined in A")
        result = self.one()
        base = x
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # --- units ---

    def eta_right(self, s: AElement) -> AElement:
        """eta_R on a k^M[tau] coefficient: fixes k^M and sends tau to tau + rho*tau_0."""
        if not s.is_scalar():
            raise InvalidArgument(f"{s} is not a k^M[tau] coefficient")
        total = self.zero()
        for m in s.terms:
            total = total + self.element([AMonomial(m.c, 0, (), ())]) * self.power(self.eta_right_tau, m.tpow)
        return total

    def right_scale(self, x: AElement, s: AElement) -> AElement:
        """x * eta_R(s)."""
        if not s.is_homogeneous():
            raise InvalidArgument(f"right scalar {s} is not homogeneous")
        return x * self.eta_right(s)

    # --- conjugation ---

    def _conj_tau(self, r: int) -> AElement:
        key = ("tau", r)
        if key not in self._conj_gen:
            acc = self.tau_i(r)
            for i in range(r):
                acc = acc + self.power(self.xi(r - i), 2 ** i) * self._conj_tau(i)
            self._conj_gen[key] = acc
        return self._conj_gen[key]

    def _conj_xi(self, r: int) -> AElement:
        key = ("xi", r)
        if key not in self._conj_gen:
            acc = self.xi(r)
            for i in range(1, r):
                acc = acc + self.power(self.xi(r - i), 2 ** i) * self._conj_xi(i)
            self._conj_gen[key] = acc
        return self._conj_gen[key]

    def conjugate_monomial(self, m: AMonomial) -> AElement:
        cached = self._conj_cache.get(m)
        if cached is not None:
            return cached
        result = self.element([AMonomial(m.c, 0, (), ())]) * self.power(self.eta_right_tau, m.tpow)
        for i, e in enumerate(m.E):
            if e:
                result = result * self._conj_tau(i)
        for i, r in enumerate(m.R, start=1):
            if r:
                result = result * self.power(self._conj_xi(i), r)
        self._conj_cache[m] = result
        return result

    def conjugate(self, x: AElement) -> AElement:
        total: set = set()
        for m in x.terms:
            total.symmetric_difference_update(self.conjugate_monomial(m).terms)
        return AElement(self, frozenset(total))

    # --- tensors ---

    def push_right(self, raw: Iterable[Tuple[AMonomial, ...]]) -> FrozenSet[Tuple[AMonomial, ...]]:
        """Move coefficients of every non-final factor one step to the right.

        k^M classes are central; a left tau is rewritten with
        m*tau (x) y = m (x) tau*y + rho*tau_0*m (x) y.
        """
        out: set = set()
        pending = list(raw)
        rho_tau0 = None if self._rho is None else AMonomial(self._rho, 0, (1,), ())
        while pending:
            term = pending.pop()
            pos = next((k for k in range(len(term) - 1) if not self.is_pure(term[k])), None)
            if pos is None:
                out ^= {term}
                continue
            m, nxt = term[pos], term[pos + 1]
            if m.c != self._one_c:
                moved = self.km.mul(m.c, nxt.c)
                if moved is None:
                    continue
                head = AMonomial(self._one_c, m.tpow, m.E, m.R)
                pending.append(term[:pos] + (head, nxt._replace(c=moved)) + term[pos + 2:])
                continue
            lowered = m._replace(tpow=m.tpow - 1)
            pending.append(term[:pos] + (lowered, nxt._replace(tpow=nxt.tpow + 1)) + term[pos + 2:])
            if rho_tau0 is not None:
                for extra in self.mul_monomials(lowered, rho_tau0):
                    pending.append(term[:pos] + (extra, nxt) + term[pos + 2:])
        return frozenset(out)

    def tensor(self, terms: Iterable[Tuple[AMonomial, ...]], arity: int = 2) -> TensorElement:
        return TensorElement(self, self.push_right(terms), arity)

    def tensor_unit(self, arity: int = 2) -> TensorElement:
        return TensorElement(self, frozenset({(self.unit_monomial,) * arity}), arity)

    def tensor_mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        if x.arity != y.arity:
            raise InvalidArgument("tensor arities differ")
        acc: set = set()
        for s in x.terms:
            for t in y.terms:
                factors = [self.mul_monomials(a, b) for a, b in zip(s, t)]
                if any(not f for f in factors):
                    continue
                raw = _cartesian(factors)
                acc.symmetric_difference_update(self.push_right(raw))
        return TensorElement(self, frozenset(acc), x.arity)

    # --- coproduct ---

    def _delta_generator(self, kind: str, r: int) -> TensorElement:
        one = self.unit_monomial
        if kind == "tau":
            gen = self.pure(E=unit_vector(r))
            terms = {(gen, one), (one, gen)}
            for i in range(r):
                terms ^= {(self.pure(R=unit_vector(r - i - 1, 2 ** i)), self.pure(E=unit_vector(i)))}
        else:
            gen = self.pure(R=unit_vector(r - 1))
            terms = {(gen, one), (one, gen)}
            for i in range(1, r):
                terms ^= {(self.pure(R=unit_vector(r - i - 1, 2 ** i)), self.pure(R=unit_vector(i - 1)))}
        return TensorElement(self, frozenset(terms))

    def _delta_of_pure(self, m: AMonomial) -> TensorElement:
        cached = self._delta_pure.get(m)
        if cached is not None:
            return cached
        if m == self.unit_monomial:
            result = self.tensor_unit()
        else:
            # peel off the last generator
            if m.R:
                i = len(m.R)
                rest = self.pure(E=m.E, R=m.R[:-1] + (m.R[-1] - 1,))
                factor = self._delta_generator("xi", i)
            else:
                i = len(m.E) - 1
                rest = self.pure(E=m.E[:-1])
                factor = self._delta_generator("tau", i)
            result = self._delta_of_pure(rest) * factor
        self._delta_pure[m] = result
        return result

    def coproduct_monomial(self, m: AMonomial) -> FrozenSet[Tuple[AMonomial, AMonomial]]:
        cached = self._delta_cache.get(m)
        if cached is None:
            raw = (
                (AMonomial(m.c, m.tpow, a.E, a.R), b)
                for a, b in self._delta_of_pure(self.pure_part(m)).terms
            )
            cached = self.push_right(raw)
            self._delta_cache[m] = cached
        return cached

    def coproduct(self, x: AElement) -> TensorElement:
        acc: set = set()
        for m in x.terms:
            acc.symmetric_difference_update(self.coproduct_monomial(m))
        return TensorElement(self, frozenset(acc))

    def coproduct_left(self, x: AElement) -> TensorElement:
        """(Delta (x) id) Delta(x) as a 3-tensor."""
        raw = []
        for a, b in self.coproduct(x).terms:
            for a1, a2 in self.coproduct_monomial(a):
                raw.append((a1, a2, b))
        return TensorElement(self, self.push_right(_xor_terms(raw)), 3)

    def coproduct_right(self, x: AElement) -> TensorElement:
        """(id (x) Delta) Delta(x) as a 3-tensor."""
        raw = []
        for a, b in self.coproduct(x).terms:
            for b1, b2 in self.coproduct_monomial(b):
                raw.append((a, b1, b2))
        return TensorElement(self, self.push_right(_xor_terms(raw)), 3)

    def counit_left(self, t: TensorElement) -> AElement:
        """Collapse the left factor by its coefficient of 1."""
        return self.element(b for a, b in t.terms if a == self.unit_monomial)

    def counit_right(self, t: TensorElement) -> AElement:
        """Collapse the right factor: a (x) s*1 becomes a * eta_R(s)."""
        total = self.zero()
        for a, b in t.terms:
            if not b.E and not b.R:
                total = total + self.element([a]) * self.eta_right(self.element([b]))
        return total

    # --- pairing and actions ---

    def kronecker(self, dual_of: AMonomial, x: AElement) -> AElement:
        """Left coefficient of the basis monomial ``dual_of`` in x."""
        if not self.is_pure(dual_of):
            raise InvalidArgument("the pairing is taken against pure basis monomials")
        return self.element(
            AMonomial(m.c, m.tpow, (), ()) for m in x.terms if m.E == dual_of.E and m.R == dual_of.R
        )

    def dual_monomial(self, op: SteenrodOp) -> AMonomial:
        if SteenrodOp(op) == SteenrodOp.SQ1:
            return self.pure(E=(1,))
        return self.pure(R=(1,))

    def act(self, op: SteenrodOp, side: Side, x: AElement) -> AElement:
        """Right action sum x' * <op, x''>; left action sum <op, iota(x')> * x''."""
        m0 = self.dual_monomial(op)
        total = self.zero()
        for a, b in self.coproduct(x).terms:
            if Side(side) == Side.RIGHT:
                if b.E == m0.E and b.R == m0.R:
                    total = total + self.element([a]) * self.eta_right(self.element([self.scalar_part(b)]))
            else:
                coefficient = self.kronecker(m0, self.conjugate_monomial(a))
                if coefficient:
                    total = total + coefficient * self.element([b])
        return total

    # --- bases ---

    def generators(self) -> List[GradedGenerator]:
        gens = [GradedGenerator("tau", TAU)]
        gens += [GradedGenerator(f"t{i}", tau_degree(i), 1) for i in range(self.gen_cap + 1)]
        gens += [GradedGenerator(f"x{i}", xi_degree(i)) for i in range(1, self.gen_cap + 1)]
        return gens

    def check_window(self, b: Bidegree) -> None:
        """Generators above the cap have excess >= 2^(cap+1) - 1; stay below that."""
        limit = 2 ** (self.gen_cap + 1) - 1
        if b.excess >= limit:
            raise GeneratorCapExceeded(self.gen_cap + 1, self.gen_cap, f"bidegree {b} needs generator")

    def basis(self, b: Bidegree) -> Tuple[AMonomial, ...]:
        cached = self._basis_cache.get(b)
        if cached is not None:
            return cached
        self.check_window(b)
        gens = self.generators()
        n_tau = self.gen_cap + 1
        out = []
        for word, d in words_of_degree(gens, b):
            tpow = word[0]
            E = trim(word[1:1 + n_tau])
            R = trim(word[1 + n_tau:])
            for c in self.km.basis(d):
                out.append(AMonomial(c, tpow, E, R))
        result = tuple(sorted(out, key=self.sort_key))
        logger.debug("basis %s over %s: %d monomials", b, self.preset.name, len(result))
        self._basis_cache[b] = result
        return result

    def pure_monomials(self, max_weight: int) -> List[AMonomial]:
        """All pure tau(E)xi(R) of weight <= max_weight, tau_0 included."""
        found: List[AMonomial] = []

        def extend(E: List[int], R: List[int], weight: int, index: int) -> None:
            if index > self.gen_cap:
                found.append(self.pure(E=E, R=R))
                return
            w = 2 ** index - 1
            for e in (0, 1):
                if weight + e * w > max_weight:
                    break
                if index == 0:
                    extend(E + [e], R, weight, index + 1)
                    continue
                r = 0
                while weight + e * w + r * w <= max_weight:
                    extend(E + [e], R + [r], weight + e * w + r * w, index + 1)
                    r += 1

        extend([], [], 0, 0)
        return sorted(found, key=self.sort_key)

    # --- formatting ---

    def format_monomial(self, m: AMonomial) -> str:
        parts = []
        if m.c != self._one_c:
            parts.append(self.km.name(m.c))
        if m.tpow == 1:
            parts.append("tau")
        elif m.tpow > 1:
            parts.append(f"tau^{m.tpow}")
        parts += [f"t{i}" for i, e in enumerate(m.E) if e]
        for i, r in enumerate(m.R, start=1):
            if r == 1:
                parts.append(f"x{i}")
            elif r > 1:
                parts.append(f"x{i}^{r}")
        return "*".join(parts) if parts else "1"

    def format(self, x: AElement) -> str:
        if not x.terms:
            return "0"
        return " + ".join(self.format_monomial(m) for m in x.monomials())


def _cartesian(factors: Sequence[FrozenSet[AMonomial]]) -> List[Tuple[AMonomial, ...]]:
    rows: List[Tuple[AMonomial, ...]] = [()]
    for options in factors:
        rows = [row + (m,) for row in rows for m in options]
    return rows


def _xor_terms(raw: Iterable[Tuple[AMonomial, ...]]) -> FrozenSet[Tuple[AMonomial, ...]]:
    out: set = set()
    for t in raw:
        out ^= {t}
    return frozenset(out)


@lru_cache(maxsize=None)
def dual_steenrod(preset: FieldPreset, gen_cap: int = DEFAULT_GEN_CAP) -> DualSteenrod:
    """Shared algebra instance per (preset, cap); instances carry their own caches."""
    return DualSteenrod(preset, gen_cap)


# --- module-level operations ---


def normal_form(algebra: DualSteenrod, terms) -> AElement:
    return algebra.normal_form(terms)


def mul(x: AElement, y: AElement) -> AElement:
    return x.algebra.mul(x, y)


def right_scale(x: AElement, s: AElement) -> AElement:
    return x.algebra.right_scale(x, s)


def coproduct(x: AElement) -> TensorElement:
    return x.algebra.coproduct(x)


def conjugate(x: AElement) -> AElement:
    return x.algebra.conjugate(x)


def kronecker(dual_of: AMonomial, x: AElement) -> AElement:
    return x.algebra.kronecker(dual_of, x)


def act(op: SteenrodOp, side: Side, x: AElement) -> AElement:
    return x.algebra.act(op, side, x)


def basis(preset: FieldPreset, b: Bidegree, gen_cap: int = DEFAULT_GEN_CAP) -> Tuple[AMonomial, ...]:
    return dual_steenrod(preset, gen_cap).basis(b)
