"""Brute-force oracles that produce reference values independently of the main engine.

Each oracle recomputes a quantity from first principles (symbol enumeration,
Gram-matrix classification, exhaustive monomial search, bit-packed
elimination) so that the ``oracles`` suite can compare it against the engine.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

logger = logging.getLogger(__name__)

Gram = Tuple[Tuple[int, ...], ...]


# --- Milnor K-theory mod 2 of a prime field ---


@dataclass(frozen=True)
class MilnorKOracle:
    q: int
    dims: Dict[int, int]
    rho_nonzero: bool
    nonsquare: int


def _check_odd_prime(q: int) -> None:
    if q < 3 or q % 2 == 0 or any(q % d == 0 for d in range(3, int(q ** 0.5) + 1, 2)):
        raise ValueError(f"oracle needs an odd prime, got {q}")


def square_classes(q: int) -> Tuple[Set[int], int]:
    """Squares of F_q^x and the smallest non-square."""
    _check_odd_prime(q)
    squares = {(a * a) % q for a in range(1, q)}
    nonsquare = min(a for a in range(1, q) if a not in squares)
    return squares, nonsquare


@lru_cache(maxsize=None)
def milnor_k_mod2(q: int) -> MilnorKOracle:
    """k^M_0, k^M_1, k^M_2 of F_q by symbol enumeration.

    k^M_1 = F_q^x / squares is one-dimensional with symbol [a] = 1 iff a is a
    non-square. k^M_2 is the quotient of k^M_1 (x) k^M_1 by the Steinberg
    symbols [a][1-a].
    """
    squares, nonsquare = square_classes(q)

    def symbol(a: int) -> int:
        return 0 if a % q in squares else 1

    steinberg = [symbol(a) * symbol(1 - a) for a in range(2, q)]
    relation_rank = 1 if any(steinberg) else 0
    dims = {0: 1, 1: 1, 2: 1 - relation_rank}
    return MilnorKOracle(q=q, dims=dims, rho_nonzero=bool(symbol(-1)), nonsquare=nonsquare)


# --- Witt ring by Gram-matrix classification ---


def _as_gram(mat: np.ndarray) -> Gram:
    return tuple(tuple(int(v) for v in row) for row in mat)


def _nullspace_mod_p(rows: np.ndarray, p: int) -> List[np.ndarray]:
    mat = rows.copy() % p
    m, n = mat.shape
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if mat[i, col] % p), None)
        if pivot is None:
            continue
        mat[[r, pivot]] = mat[[pivot, r]]
        mat[r] = (mat[r] * pow(int(mat[r, col]), -1, p)) % p
        for i in range(m):
            if i != r and mat[i, col]:
                mat[i] = (mat[i] - mat[i, col] * mat[r]) % p
        pivots.append(col)
        r += 1
        if r == m:
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        vec = np.zeros(n, dtype=np.int64)
        vec[free] = 1
        for row, col in enumerate(pivots):
            vec[col] = (-mat[row, free]) % p
        basis.append(vec)
    return basis


def _isotropic_vector(gram: np.ndarray, p: int) -> Optional[np.ndarray]:
    n = gram.shape[0]
    for coords in itertools.product(range(p), repeat=n):
        if not any(coords):
            continue
        v = np.array(coords, dtype=np.int64)
        if int(v @ gram @ v) % p == 0:
            return v
    return None


def anisotropic_part(gram: np.ndarray, p: int) -> np.ndarray:
    """Split off hyperbolic planes until the form is anisotropic."""
    gram = np.array(gram, dtype=np.int64) % p
    while gram.shape[0] > 0:
        v = _isotropic_vector(gram, p)
        if v is None:
            break
        gv = (gram @ v) % p
        k = int(np.nonzero(gv)[0][0])
        w = np.zeros_like(v)
        w[k] = 1
        constraints = np.vstack([(v @ gram) % p, (w @ gram) % p])
        complement = _nullspace_mod_p(constraints, p)
        if not complement:
            return np.zeros((0, 0), dtype=np.int64)
        c = np.stack(complement, axis=1)
        gram = (c.T @ gram @ c) % p
    return gram


def _isometric(g1: np.ndarray, g2: np.ndarray, p: int) -> bool:
    n = g1.shape[0]
    if n != g2.shape[0]:
        return False
    if n == 0:
        return True
    if n > 2:
        raise ValueError("anisotropic forms over a finite field have rank at most 2")
    for entries in itertools.product(range(p), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if int(round(np.linalg.det(m))) % p == 0:
            continue
        if np.array_equal((m.T @ g1 @ m) % p, g2 % p):
            return True
    return False


def _diagonal_label(gram: np.ndarray, p: int, squares: Set[int], nonsquare: int) -> str:
    entries = []
    gram = gram.copy() % p
    while gram.shape[0]:
        n = gram.shape[0]
        v = next(
            np.array(c, dtype=np.int64)
            for c in itertools.product(range(p), repeat=n)
            if any(c) and int(np.array(c) @ gram @ np.array(c)) % p
        )
        a = int(v @ gram @ v) % p
        entries.append(1 if a in squares else nonsquare)
        rest = _nullspace_mod_p(((v @ gram) % p).reshape(1, -1), p)
        if not rest:
            break
        c = np.stack(rest, axis=1)
        gram = (c.T @ gram @ c) % p
    return "<" + ",".join(str(e) for e in sorted(entries)) + ">"


@dataclass(frozen=True)
class WittOracleResult:
    labels: Tuple[str, ...]
    add: Tuple[Tuple[int, ...], ...]
    mul: Tuple[Tuple[int, ...], ...]
    rank_parity: Tuple[int, ...]
    unit_classes: Dict[int, int] = field(default_factory=dict)
    minus_one: int = 1
    zero: int = 0
    one: int = 1


@lru_cache(maxsize=None)
def classify_finite_witt_ring(q: int) -> WittOracleResult:
    """W(F_q) by closing the one-dimensional forms under orthogonal sum."""
    squares, nonsquare = square_classes(q)
    reps: List[np.ndarray] = [np.zeros((0, 0), dtype=np.int64), np.array([[1]], dtype=np.int64)]

    def classify(gram: np.ndarray) -> int:
        aniso = anisotropic_part(gram, q)
        for idx, rep in enumerate(reps):
            if _isometric(aniso, rep, q):
                return idx
        reps.append(aniso)
        return len(reps) - 1

    def block(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
        n1, n2 = g1.shape[0], g2.shape[0]
        out = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
        out[:n1, :n1] = g1
        out[n1:, n1:] = g2
        return out

    unit_classes = {a: classify(np.array([[a]], dtype=np.int64)) for a in range(1, q)}
    seen = 0
    while seen < len(reps):
        seen = len(reps)
        for i in range(seen):
            for j in range(seen):
                classify(block(reps[i], reps[j]))

    size = len(reps)
    add = tuple(tuple(classify(block(reps[i], reps[j])) for j in range(size)) for i in range(size))
    mul = tuple(
        tuple(classify(np.kron(reps[i], reps[j]) % q) for j in range(size)) for i in range(size)
    )
    if len(reps) != size:
        raise RuntimeError("Witt classification did not close under the ring operations")
    labels = tuple(
        "0" if rep.shape[0] == 0 else _diagonal_label(rep, q, squares, nonsquare) for rep in reps
    )
    logger.debug("classified W(F_%d): %d classes %s", q, size, labels)
    return WittOracleResult(
        labels=labels,
        add=add,
        mul=mul,
        rank_parity=tuple(rep.shape[0] % 2 for rep in reps),
        unit_classes=unit_classes,
        minus_one=unit_classes[q - 1],
    )


@lru_cache(maxsize=None)
def classify_closed_witt_ring() -> WittOracleResult:
    """Over a quadratically closed field every form is <1,...,1>; only rank mod 2 survives."""
    parities = (0, 1)
    add = tuple(tuple((a + b) % 2 for b in parities) for a in parities)
    mul = tuple(tuple((a * b) % 2 for b in parities) for a in parities)
    return WittOracleResult(
        labels=("0", "<1>"),
        add=add,
        mul=mul,
        rank_parity=(0, 1),
        unit_classes={1: 1},
        minus_one=1,
    )


# --- exhaustive enumeration and elimination ---


def km_monomials_bruteforce(
    n_classes: int, vanishing: Sequence[Tuple[int, ...]], degree: int
) -> List[Tuple[int, ...]]:
    """Exponent vectors of total degree ``degree`` not divisible by a vanishing monomial."""
    out = []
    for exps in itertools.product(range(degree + 1), repeat=n_classes):
        if sum(exps) != degree:
            continue
        if any(all(e >= v for e, v in zip(exps, van)) for van in vanishing):
            continue
        out.append(tuple(exps))
    return out


def dual_steenrod_monomials_bruteforce(
    p: int,
    q: int,
    gen_cap: int,
    n_classes: int,
    vanishing: Sequence[Tuple[int, ...]],
) -> Set[Tuple[Tuple[int, ...], int, Tuple[int, ...], Tuple[int, ...]]]:
    """Every normal-form monomial c*tau^n*tau(E)*xi(R) of bidegree (p, q), by nested search."""
    taus = [(2 ** (i + 1) - 1, 2 ** i - 1) for i in range(gen_cap + 1)]
    xis = [(2 ** (i + 1) - 2, 2 ** i - 1) for i in range(1, gen_cap + 1)]
    found = set()
    excess = p - q
    if excess < 0:
        return found

    def trim(seq):
        seq = list(seq)
        while seq and seq[-1] == 0:
            seq.pop()
        return tuple(seq)

    for E in itertools.product((0, 1), repeat=len(taus)):
        ep = sum(e * d[0] for e, d in zip(E, taus))
        eq = sum(e * d[1] for e, d in zip(E, taus))
        if ep - eq > excess:
            continue
        bounds = [range(0, (excess - (ep - eq)) // (d[0] - d[1]) + 1) for d in xis]
        for R in itertools.product(*bounds):
            rp = ep + sum(r * d[0] for r, d in zip(R, xis))
            rq = eq + sum(r * d[1] for r, d in zip(R, xis))
            tpow = excess - (rp - rq)
            if tpow < 0:
                continue
            d = rp - p
            if d < 0:
                continue
            for c in km_monomials_bruteforce(n_classes, vanishing, d):
                found.add((c, tpow, trim(E), trim(R)))
    return found


def bitset_rank(rows: Iterable[int]) -> int:
    """Rank over F2 of rows packed into Python integers (xor basis)."""
    basis: Dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


def pack_columns(matrix: np.ndarray) -> List[int]:
    """Columns of a 0/1 matrix as packed integers."""
    out = []
    for col in np.asarray(matrix, dtype=np.uint8).T:
        value = 0
        for bit in col:
            value = (value << 1) | int(bit)
        out.append(value)
    return out


def dense_homology_dim(outgoing: np.ndarray, incoming: np.ndarray) -> int:
    """dim ker(outgoing) - rank(incoming), by bit-packed elimination."""
    outgoing = np.asarray(outgoing, dtype=np.uint8)
    n_cols = outgoing.shape[1]
    kernel = n_cols - bitset_rank(pack_columns(outgoing.T))
    return kernel - bitset_rank(pack_columns(np.asarray(incoming, dtype=np.uint8).T))
