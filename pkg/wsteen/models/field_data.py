"""Coefficient arithmetic for the field presets: k^M_*/2, W(k) and the K^W tower."""

from __future__ import annotations

import logging
import math
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wsteen.models import oracles
from wsteen.models.errors import InvalidArgument, PresetError, PresetMismatch

logger = logging.getLogger(__name__)

RESERVED_NAME = re.compile(r"^(t\d+|xb\d+|x\d+|tau|rho)$")


# --- Presets ---


class FieldKind(str, Enum):
    QUADRATICALLY_CLOSED = "qcl"
    FINITE_Q1 = "fq1"
    FINITE_Q3 = "fq3"
    CUSTOM = "custom"


class FieldPreset(BaseModel):
    """A base field, described by the mod-2 Milnor K-theory it contributes."""

    model_config = ConfigDict(frozen=True)

    kind: FieldKind
    name: str
    rho_nilpotence: int = Field(1, ge=1, description="n with rho^n = 0; 1 means rho = 0")
    extra_classes: Tuple[str, ...] = ()
    vanishing: Tuple[Tuple[str, ...], ...] = ()
    field_order: Optional[int] = None

    @model_validator(mode="after")
    def _check_classes(self) -> "FieldPreset":
        seen = set()
        for cls in self.extra_classes:
            if not cls.isidentifier() or RESERVED_NAME.match(cls):
                raise ValueError(f"invalid class name {cls!r}")
            if cls in seen:
                raise ValueError(f"duplicate class name {cls!r}")
            seen.add(cls)
        known = set(self.classes) | {"rho"}
        for product in self.vanishing:
            if len(product) < 2:
                raise ValueError("vanishing products need at least two degree-1 factors")
            unknown = [f for f in product if f not in known]
            if unknown:
                raise ValueError(f"vanishing product uses unknown classes {unknown}")
        return self

    @property
    def classes(self) -> Tuple[str, ...]:
        """Degree-1 generators of k^M, rho first when it is nonzero."""
        if self.rho_nilpotence > 1:
            return ("rho",) + self.extra_classes
        return self.extra_classes

    @property
    def has_witt_model(self) -> bool:
        return self.kind != FieldKind.CUSTOM

    def __str__(self) -> str:
        return self.name


QCL = FieldPreset(kind=FieldKind.QUADRATICALLY_CLOSED, name="qcl")
FQ1 = FieldPreset(
    kind=FieldKind.FINITE_Q1,
    name="fq1",
    extra_classes=("u",),
    vanishing=(("u", "u"),),
    field_order=5,
)
FQ3 = FieldPreset(kind=FieldKind.FINITE_Q3, name="fq3", rho_nilpotence=2, field_order=3)

PRESETS: Dict[str, FieldPreset] = {p.name: p for p in (QCL, FQ1, FQ3)}


def load_custom_preset(path: str) -> FieldPreset:
    """Read a ``rho_nilpotence`` / ``classes`` / ``vanishing`` text file."""
    if not os.path.exists(path):
        raise PresetError(f"preset file not found: {path}")
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise PresetError(f"{path}:{lineno}: expected 'key: value'")
            key, value = (part.strip() for part in line.split(":", 1))
            if key not in ("rho_nilpotence", "classes", "vanishing"):
                raise PresetError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    try:
        nilpotence = int(values.get("rho_nilpotence", "1"))
        classes = tuple(c.strip() for c in values.get("classes", "").split(",") if c.strip())
        vanishing = tuple(
            tuple(f.strip() for f in prod.split("*"))
            for prod in values.get("vanishing", "").split(",")
            if prod.strip()
        )
        return FieldPreset(
            kind=FieldKind.CUSTOM,
            name=f"custom:{os.path.basename(path)}",
            rho_nilpotence=nilpotence,
            extra_classes=classes,
            vanishing=vanishing,
        )
    except ValueError as exc:
        raise PresetError(f"{path}: {exc}") from exc


def resolve_preset(flag: str) -> FieldPreset:
    """Turn a ``--field`` value (qcl, fq1, fq3, custom:<file>) into a preset."""
    if flag in PRESETS:
        return PRESETS[flag]
    if flag.startswith("custom:"):
        return load_custom_preset(flag[len("custom:"):])
    raise PresetError(f"unknown field preset {flag!r}; expected qcl, fq1, fq3 or custom:<file>")


# --- Milnor K-theory mod 2 ---

KMMonomial = Tuple[int, ...]


class MilnorKRing:
    """k^M_*(k)/2 as a monomial quotient of F2[classes]."""

    def __init__(self, preset: FieldPreset):
        self.preset = preset
        self.classes = preset.classes
        n = len(self.classes)
        self.one: KMMonomial = (0,) * n
        vanishing = []
        for product in preset.vanishing:
            vec = [0] * n
            for name in product:
                if name == "rho" and "rho" not in self.classes:
                    vec = None
                    break
                vec[self.classes.index(name)] += 1
            if vec is not None:
                vanishing.append(tuple(vec))
        if "rho" in self.classes:
            vec = [0] * n
            vec[0] = preset.rho_nilpotence
            vanishing.append(tuple(vec))
        self.vanishing: Tuple[KMMonomial, ...] = tuple(vanishing)
        self._basis: Dict[int, Tuple[KMMonomial, ...]] = {}

    def is_zero(self, m: KMMonomial) -> bool:
        return any(all(e >= v for e, v in zip(m, van)) for van in self.vanishing)

    def mul(self, a: KMMonomial, b: KMMonomial) -> Optional[KMMonomial]:
        """Product of two monomials, or None when it vanishes."""
        m = tuple(x + y for x, y in zip(a, b))
        return None if self.is_zero(m) else m

    @staticmethod
    def degree(m: KMMonomial) -> int:
        return sum(m)

    def generator(self, name: str) -> Optional[KMMonomial]:
        if name not in self.classes:
            return None
        vec = [0] * len(self.classes)
        vec[self.classes.index(name)] = 1
        m = tuple(vec)
        return None if self.is_zero(m) else m

    @property
    def rho(self) -> Optional[KMMonomial]:
        return self.generator("rho")

    def basis(self, degree: int) -> Tuple[KMMonomial, ...]:
        if degree < 0:
            return ()
        if degree not in self._basis:
            out = [m for m in _compositions(degree, len(self.classes)) if not self.is_zero(m)]
            self._basis[degree] = tuple(sorted(out, reverse=True))
        return self._basis[degree]

    def name(self, m: KMMonomial) -> str:
        parts = []
        for cls, e in zip(self.classes, m):
            if e == 1:
                parts.append(cls)
            elif e > 1:
                parts.append(f"{cls}^{e}")
        return "*".join(parts) if parts else "1"


def _compositions(total: int, parts: int) -> Iterable[KMMonomial]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def milnor_k(preset: FieldPreset) -> MilnorKRing:
    return MilnorKRing(preset)


@dataclass(frozen=True)
class KM2Element:
    """An element of k^M_*/2: a set of surviving monomials."""

    preset: FieldPreset
    terms: FrozenSet[KMMonomial] = frozenset()

    @property
    def ring(self) -> MilnorKRing:
        return milnor_k(self.preset)

    def _check(self, other: "KM2Element") -> None:
        if self.preset != other.preset:
            raise PresetMismatch(self.preset.name, other.preset.name)

    def __add__(self, other: "KM2Element") -> "KM2Element":
        self._check(other)
        return KM2Element(self.preset, self.terms ^ other.terms)

    def __mul__(self, other: "KM2Element") -> "KM2Element":
        return km_mul(self, other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def component(self, degree: int) -> "KM2Element":
        return KM2Element(self.preset, frozenset(m for m in self.terms if sum(m) == degree))

    def degrees(self) -> List[int]:
        return sorted({sum(m) for m in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        return " + ".join(ring.name(m) for m in sorted(self.terms, key=lambda m: (sum(m), m)))


def km_element(preset: FieldPreset, monomials: Iterable[KMMonomial]) -> KM2Element:
    ring = milnor_k(preset)
    terms: set = set()
    for m in monomials:
        if not ring.is_zero(m):
            terms ^= {m}
    return KM2Element(preset, frozenset(terms))


def km_one(preset: FieldPreset) -> KM2Element:
    return KM2Element(preset, frozenset({milnor_k(preset).one}))


def km_class(preset: FieldPreset, name: str) -> KM2Element:
    """The degree-1 class called ``name`` (zero when it vanishes in this preset)."""
    ring = milnor_k(preset)
    if name == "rho" or name in ring.classes:
        m = ring.generator(name)
        return KM2Element(preset, frozenset({m}) if m is not None else frozenset())
    raise InvalidArgument(f"preset {preset.name} has no class {name!r}")


def km_mul(a: KM2Element, b: KM2Element) -> KM2Element:
    if a.preset != b.preset:
        raise PresetMismatch(a.preset.name, b.preset.name)
    ring = a.ring
    terms: set = set()
    for x in a.terms:
        for y in b.terms:
            m = ring.mul(x, y)
            if m is not None:
                terms ^= {m}
    return KM2Element(a.preset, frozenset(terms))


def km_basis(preset: FieldPreset, degree: int) -> List[KM2Element]:
    return [KM2Element(preset, frozenset({m})) for m in milnor_k(preset).basis(degree)]


# --- Witt ring ---


@dataclass(frozen=True)
class WittRingModel:
    """W(k) as explicit addition and multiplication tables over element indices."""

    preset_name: str
    labels: Tuple[str, ...]
    add_table: Tuple[Tuple[int, ...], ...]
    mul_table: Tuple[Tuple[int, ...], ...]
    rank_parity: Tuple[int, ...]
    symbols: Dict[str, int] = field(default_factory=dict)
    rho_element: int = 0
    zero: int = 0
    one: int = 1

    @property
    def size(self) -> int:
        return len(self.labels)

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return next(b for b in self.elements() if self.add(a, b) == self.zero)

    def scale(self, k: int, a: int) -> int:
        out = self.zero
        for _ in range(k):
            out = self.add(out, a)
        return out

    def additive_order(self, a: int) -> int:
        k, acc = 1, a
        while acc != self.zero:
            acc = self.add(acc, a)
            k += 1
        return k

    @property
    def two(self) -> int:
        return self.add(self.one, self.one)

    @property
    def exponent(self) -> int:
        """Smallest e with 2^e * w = 0 for every w."""
        e = 0
        while any(self.scale(2 ** e, w) != self.zero for w in self.elements()):
            e += 1
        return e

    def element(self, label: str) -> int:
        return self.labels.index(label)

    def label(self, a: int) -> str:
        return self.labels[a]

    def check_axioms(self) -> List[str]:
        """Exhaustive ring-axiom check; returns a list of violations."""
        failures = []
        els = self.elements()
        for a in els:
            if self.add(a, self.zero) != a or self.mul(a, self.one) != a:
                failures.append(f"identity fails at {self.label(a)}")
            for b in els:
                if self.add(a, b) != self.add(b, a) or self.mul(a, b) != self.mul(b, a):
                    failures.append(f"commutativity fails at {self.label(a)}, {self.label(b)}")
                for c in els:
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)):
                        failures.append("additive associativity fails")
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        failures.append("multiplicative associativity fails")
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                        failures.append("distributivity fails")
        return failures

    @property
    def fundamental_ideal(self) -> FrozenSet[int]:
        return frozenset(a for a in self.elements() if self.rank_parity[a] == 0)

    def ideal_power(self, n: int) -> FrozenSet[int]:
        if n <= 0:
            return frozenset(self.elements())
        ideal = self.fundamental_ideal
        power = ideal
        for _ in range(n - 1):
            products = {self.mul(a, b) for a in power for b in ideal}
            power = self._additive_closure(products)
        return power

    def _additive_closure(self, generators: Iterable[int]) -> FrozenSet[int]:
        span = {self.zero}
        frontier = set(generators)
        while frontier:
            new = {self.add(a, g) for a in span for g in frontier} - span
            span |= new
            frontier = new
        return frozenset(span)


@lru_cache(maxsize=None)
def witt_model(preset: FieldPreset) -> WittRingModel:
    """The Witt ring table of a named preset, built once by the classification oracle."""
    if preset.kind == FieldKind.CUSTOM:
        raise PresetError(f"{preset.name} declares no Witt model; only mod-2 modules are available")
    if preset.kind == FieldKind.QUADRATICALLY_CLOSED:
        result = oracles.classify_closed_witt_ring()
        nonsquare = None
    else:
        result = oracles.classify_finite_witt_ring(preset.field_order)
        nonsquare = oracles.milnor_k_mod2(preset.field_order).nonsquare
    model = WittRingModel(
        preset_name=preset.name,
        labels=result.labels,
        add_table=result.add,
        mul_table=result.mul,
        rank_parity=result.rank_parity,
        zero=result.zero,
        one=result.one,
    )
    minus_one_class = model.neg(model.one)
    rho_w = model.add(result.minus_one, minus_one_class)
    symbols = {}
    if "rho" in preset.classes:
        symbols["rho"] = rho_w
    if nonsquare is not None:
        for cls in preset.extra_classes:
            symbols[cls] = model.add(result.unit_classes[nonsquare], minus_one_class)
    logger.debug("Witt model for %s: %s", preset.name, result.labels)
    return WittRingModel(
        preset_name=model.preset_name,
        labels=model.labels,
        add_table=model.add_table,
        mul_table=model.mul_table,
        rank_parity=model.rank_parity,
        symbols=symbols,
        rho_element=rho_w,
        zero=model.zero,
        one=model.one,
    )


# --- Witt K-theory tower ---


class KWTower:
    """K^W_n = I^max(n,0) with eta the inclusion of ideal powers."""

    def __init__(self, preset: FieldPreset):
        self.preset = preset
        self.witt = witt_model(preset)
        self._groups: Dict[int, FrozenSet[int]] = {}

    def group(self, n: int) -> FrozenSet[int]:
        key = max(n, 0)
        if key not in self._groups:
            self._groups[key] = self.witt.ideal_power(key)
        return self._groups[key]

    def contains(self, n: int, x: int) -> bool:
        return x in self.group(n)

    def eta(self, n: int, x: int) -> int:
        if x not in self.group(n + 1):
            raise InvalidArgument(f"{self.witt.label(x)} is not in K^W_{n + 1}")
        return x

    def cokernel_dim(self, n: int) -> int:
        ratio = len(self.group(n)) // len(self.group(n + 1))
        dim = int(math.log2(ratio))
        if 2 ** dim != ratio:
            raise PresetError(f"K^W_{n}/eta K^W_{n + 1} is not an F2-vector space")
        return dim

    def rho(self) -> Tuple[int, int]:
        """The class of rho = <-1> - <1> in K^W_1."""
        return 1, self.witt.rho_element

    def residue(self, n: int, x: int) -> KM2Element:
        """Image of x in K^W_n / eta K^W_{n+1} = k^M_n."""
        preset = self.preset
        ring = milnor_k(preset)
        if n < 0:
            return KM2Element(preset)
        if n == 0:
            return km_one(preset) if self.witt.rank_parity[x] else KM2Element(preset)
        if n == 1:
            target = self.group(2)
            for monomials in _subsets(ring.basis(1)):
                total = self.witt.zero
                for m in monomials:
                    total = self.witt.add(total, self._symbol(m))
                if self.witt.add(x, self.witt.neg(total)) in target:
                    return km_element(preset, monomials)
            raise PresetError(f"no symbol expression for {self.witt.label(x)} in K^W_1")
        if x == self.witt.zero or not ring.basis(n):
            return KM2Element(preset)
        raise PresetError(f"residues in degree {n} need symbols of higher ideal powers")

    def lift(self, value: KM2Element) -> Tuple[int, int]:
        """A homogeneous class of k^M_n lifted to (n, w) in K^W_n."""
        degrees = value.degrees()
        if not degrees:
            return 0, self.witt.zero
        if len(degrees) > 1:
            raise InvalidArgument(f"{value} is not homogeneous")
        n = degrees[0]
        if n == 0:
            return 0, self.witt.one
        if n == 1:
            total = self.witt.zero
            for m in value.terms:
                total = self.witt.add(total, self._symbol(m))
            return 1, total
        raise PresetError(f"cannot lift {value} from k^M_{n}")

    def _symbol(self, m: KMMonomial) -> int:
        name = self.witt_class_name(m)
        return self.witt.symbols[name]

    def witt_class_name(self, m: KMMonomial) -> str:
        return milnor_k(self.preset).classes[m.index(1)]


def _subsets(items: Tuple[KMMonomial, ...]) -> Iterable[Tuple[KMMonomial, ...]]:
    for mask in range(2 ** len(items)):
        yield tuple(items[i] for i in range(len(items)) if mask >> i & 1)


@lru_cache(maxsize=None)
def kw_tower(preset: FieldPreset) -> KWTower:
    return KWTower(preset)


def kw_eta(tower: KWTower, n: int, x: int) -> int:
    return tower.eta(n, x)


def exact_sequence_accounting(preset: FieldPreset, n_range: Iterable[int] = range(-4, 5)) -> Dict[int, Tuple[int, int]]:
    """Per n: (dim K^W_n / eta K^W_{n+1}, dim k^M_n)."""
    tower = kw_tower(preset)
    ring = milnor_k(preset)
    return {n: (tower.cokernel_dim(n), len(ring.basis(n))) for n in n_range}
