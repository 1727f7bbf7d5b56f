"""Degreewise matrices of the two Sq2-derivations, their homology, and the predicted counts.

The predictor side never looks at a d-matrix: it counts monomials of the
expected homology presentation, or takes the rank of products of the expected
kernel generators. Both sides share only the basis order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from wsteen.models.errors import InvalidArgument, PredictorRefused, UnknownBidegree
from wsteen.models.gf2 import gf2_column_space_basis, gf2_matmul, gf2_nullspace_basis, gf2_rank, zeros
from wsteen.models.grading import D_SHIFT, Bidegree, GradedGenerator, tau_degree, words_of_degree, xi_set_degree
from wsteen.models.milnor_dual import AElement
from wsteen.models.reports import HomologyReport
from wsteen.models.shadow_modules import HKMElement, IndexSet, ShadowModules

logger = logging.getLogger(__name__)

B_DEGREE = Bidegree(6, 1)


class MapId(str, Enum):
    D_LEFT = "d_left"
    D_RIGHT = "d_right"


def _map_id(value) -> MapId:
    try:
        return MapId(value)
    except ValueError as exc:
        raise InvalidArgument(f"unknown map {value!r}; expected d_left or d_right") from exc


@dataclass(frozen=True)
class Window:
    """Bidegrees with |p| <= max_p and min_q <= q <= max_q."""

    max_p: int = 24
    min_q: int = -16
    max_q: int = 2

    def __contains__(self, b: Bidegree) -> bool:
        return abs(b.p) <= self.max_p and self.min_q <= b.q <= self.max_q

    def bidegrees(self) -> List[Bidegree]:
        return [
            Bidegree(p, q)
            for p in range(-self.max_p, self.max_p + 1)
            for q in range(self.min_q, self.max_q + 1)
        ]


@dataclass
class F2Matrix:
    map_id: str
    bidegree: Bidegree
    row_labels: List[str]
    col_labels: List[str]
    data: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape


@dataclass
class LinearAnalysis:
    rank: int
    kernel: np.ndarray  # one vector per row, in column coordinates
    image: np.ndarray  # one vector per row, in row coordinates
    col_labels: List[str] = field(default_factory=list)

    def kernel_names(self) -> List[str]:
        return [
            " + ".join(label for label, bit in zip(self.col_labels, vec) if bit)
            for vec in self.kernel
        ]


def linear_analysis(m: F2Matrix) -> LinearAnalysis:
    rows, cols = m.shape
    if cols == 0:
        return LinearAnalysis(0, np.zeros((0, 0), dtype=np.uint8), np.zeros((0, rows), dtype=np.uint8), [])
    if rows == 0:
        return LinearAnalysis(0, np.eye(cols, dtype=np.uint8), np.zeros((0, 0), dtype=np.uint8), m.col_labels)
    return LinearAnalysis(
        rank=gf2_rank(m.data),
        kernel=gf2_nullspace_basis(m.data),
        image=gf2_column_space_basis(m.data),
        col_labels=list(m.col_labels),
    )


class KernelGenerator(NamedTuple):
    name: str
    degree: Bidegree
    lift: AElement
    in_image_ideal: bool


class HomologyEngine:
    """Matrices and homology reports for d_left and d_right inside one window."""

    def __init__(self, shadows: ShadowModules, window: Optional[Window] = None):
        self.shadows = shadows
        self.A = shadows.A
        self.window = window or Window()
        self._matrices: Dict[Tuple[MapId, Bidegree], F2Matrix] = {}
        self._generators: Optional[List[KernelGenerator]] = None

    # --- matrices ---

    def registered(self, b: Bidegree) -> bool:
        return b in self.window or (b - D_SHIFT) in self.window

    def _require(self, b: Bidegree) -> None:
        if not self.registered(b):
            raise UnknownBidegree(f"bidegree {b} is outside the window {self.window}")

    def domain(self, map_id, b: Bidegree) -> Tuple[list, List[str]]:
        map_id = _map_id(map_id)
        if map_id is MapId.D_LEFT:
            keys = self.shadows.kmhw_basis(b)
            return keys, [self.shadows.format_kmhw_key(k) for k in keys]
        monomials = self.shadows.hkm_basis(b)
        return monomials, [self.A.format_monomial(m) for m in monomials]

    def _image_labels(self, map_id: MapId, label) -> set:
        if map_id is MapId.D_LEFT:
            return set(self.shadows.d_left(self.shadows.kmhw_element([label])).terms)
        rep = self.A.element([label])
        return set(self.shadows.d_right(HKMElement(self.shadows, rep)).rep.terms)

    def matrix_of(self, map_id, b: Bidegree) -> F2Matrix:
        """Column j is the image of the j-th basis element at b, expanded at b - (2,1)."""
        map_id = _map_id(map_id)
        self._require(b)
        cached = self._matrices.get((map_id, b))
        if cached is not None:
            return cached
        cols, col_names = self.domain(map_id, b)
        rows, row_names = self.domain(map_id, b - D_SHIFT)
        index = {r: i for i, r in enumerate(rows)}
        data = zeros(len(rows), len(cols))
        for j, label in enumerate(cols):
            for image in self._image_labels(map_id, label):
                data[index[image], j] = 1
        matrix = F2Matrix(map_id.value, b, row_names, col_names, data)
        logger.debug("%s at %s: %dx%d", map_id.value, b, len(rows), len(cols))
        self._matrices[(map_id, b)] = matrix
        return matrix

    def squares_to_zero(self, map_id, b: Bidegree) -> bool:
        first = self.matrix_of(map_id, b)
        second = self.matrix_of(map_id, b - D_SHIFT) if self.registered(b - D_SHIFT) else None
        if second is None or first.data.size == 0 or second.data.size == 0:
            return True
        return not gf2_matmul(second.data, first.data).any()

    # --- homology ---

    def homology_dim(self, map_id, b: Bidegree, predict: bool = True) -> HomologyReport:
        map_id = _map_id(map_id)
        outgoing = self.matrix_of(map_id, b)
        analysis = linear_analysis(outgoing)
        dim_domain = len(outgoing.col_labels)
        dim_ker = dim_domain - analysis.rank
        incoming = self.matrix_of(map_id, b + D_SHIFT) if self.registered(b + D_SHIFT) else None
        dim_im = gf2_rank(incoming.data) if incoming is not None and incoming.data.size else 0
        report = HomologyReport(
            map_id=map_id.value,
            bidegree=str(b),
            dim_domain=dim_domain,
            dim_ker=dim_ker,
            dim_im=dim_im,
            dim_h=dim_ker - dim_im,
            witnesses=analysis.kernel_names()[:8],
        )
        if not predict:
            return report
        if map_id is MapId.D_RIGHT:
            report.predicted_dim_h = 0
            report.predicted_dim_ker = self.shadows.hkw_rank(b)
        else:
            report.predicted_dim_h = self.predicted_homology_count(b)
            report.predicted_dim_ker = self.predicted_kernel_rank(b)
        report.match = report.dim_h == report.predicted_dim_h and report.dim_ker == report.predicted_dim_ker
        return report

    # --- predictor ---

    def _require_rho_cube_zero(self) -> None:
        km = self.A.km
        rho = km.rho
        if rho is None:
            return
        square = km.mul(rho, rho)
        if square is not None and km.mul(square, rho) is not None:
            raise PredictorRefused(f"rho^3 is nonzero over {self.A.preset.name}")

    def _tau_indices(self) -> List[int]:
        return list(range(2, self.A.gen_cap + 1))

    def predicted_homology_count(self, b: Bidegree) -> int:
        """k^M-rank at b of k^M[b, tau_2, tau_3, ...]/(b^2, tau_j^2 - rho tau_{j+1})."""
        self._require_rho_cube_zero()
        count = 0
        for beta in (0, 1):
            for J in IndexSet.subsets(self._tau_indices()):
                w = B_DEGREE.scale(beta)
                for j in J:
                    w = w + tau_degree(j)
                if w.excess != b.excess:
                    continue
                d = w.p - b.p
                if d >= 0:
                    count += len(self.A.km.basis(d))
        return count

    def predictor_kernel_generators(self, weight_cap: Optional[int] = None) -> List[KernelGenerator]:
        """b, tau_j (j >= 2), c(I) (I nonempty) and c_1(I); each lifted to H F2_** H_W Z."""
        self._require_rho_cube_zero()
        if self._generators is None:
            sh = self.shadows
            t0, t1 = self.A.tau_i(0), self.A.tau_i(1)
            gens = [KernelGenerator("b", B_DEGREE, self.A.power(t0, 3) * t1, False)]
            gens += [KernelGenerator(f"t{j}", tau_degree(j), self.A.tau_i(j), False) for j in self._tau_indices()]
            for I in IndexSet.subsets(self._tau_indices()):
                if not I.is_empty:
                    gens.append(KernelGenerator(f"c{I}", xi_set_degree(I) - D_SHIFT, sh.c_element(I), True))
                gens.append(KernelGenerator(f"c1{I}", tau_degree(0) + xi_set_degree(I), sh.c1_element(I), True))
            self._generators = gens
        if weight_cap is None:
            return list(self._generators)
        return [g for g in self._generators if g.degree.q <= weight_cap]

    def _product_span(self, b: Bidegree, ideal_only: bool) -> int:
        gens = [g for g in self.predictor_kernel_generators() if g.degree.excess <= max(b.excess, 0)]
        graded = [GradedGenerator(g.name, g.degree) for g in gens]
        keys = self.shadows.kmhw_basis(b)
        index = {k: i for i, k in enumerate(keys)}
        columns = []
        for word, d in words_of_degree(graded, b):
            if ideal_only and not any(k and g.in_image_ideal for k, g in zip(word, gens)):
                continue
            product = self.A.one()
            for k, g in zip(word, gens):
                if k:
                    product = product * self.A.power(g.lift, k)
            if not product:
                continue
            for c in self.A.km.basis(d):
                image = self.shadows.to_kmhw(self.shadows.scalar(c) * product)
                vec = np.zeros(len(keys), dtype=np.uint8)
                for key in image.terms:
                    vec[index[key]] = 1
                columns.append(vec)
        if not columns:
            return 0
        return gf2_rank(np.array(columns, dtype=np.uint8).T)

    def predicted_kernel_rank(self, b: Bidegree) -> int:
        return self._product_span(b, ideal_only=False)

    def image_ideal_rank(self, b: Bidegree) -> int:
        """Rank at b of the ideal generated by c(I) (I nonempty) and c_1(I)."""
        return self._product_span(b, ideal_only=True)

    # --- the exact sequence for d_right ---

    def exactness(self, b: Bidegree) -> Tuple[int, int]:
        """(dim HKW(b) + dim HKW(b - (2,1)), dim HKM(b))."""
        sh = self.shadows
        return sh.hkw_rank(b) + sh.hkw_rank(b - D_SHIFT), len(sh.hkm_basis(b))

    def sweep(self, map_id, bidegrees: Optional[Sequence[Bidegree]] = None, predict: bool = True) -> List[HomologyReport]:
        reports = []
        for b in bidegrees if bidegrees is not None else self.window.bidegrees():
            if not self.domain(map_id, b)[0]:
                continue
            reports.append(self.homology_dim(map_id, b, predict=predict))
        return reports
