"""The engine service: configuration plus per-preset algebras, modules and models."""

from __future__ import annotations

import json
import logging
import os
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel

from wsteen.models.cache_store import DEFAULT_CACHE_DIR, ResultCache, cache_key
from wsteen.models.errors import InvalidArgument
from wsteen.models.eta_local import LocalAlgebra, local_algebra
from wsteen.models.expressions import parse_expr
from wsteen.models.field_data import FieldPreset, resolve_preset
from wsteen.models.grading import Bidegree
from wsteen.models.homology_engine import HomologyEngine, Window
from wsteen.models.milnor_dual import DEFAULT_GEN_CAP, AElement, DualSteenrod, Side, SteenrodOp
from wsteen.models.reports import BasisReport, VerificationReport
from wsteen.models.shadow_modules import IndexSet, LiftCheck, ShadowModules
from wsteen.models.suites import SUITES, run_suite
from wsteen.models.witt_models import KWHWModel, PairModel

logger = logging.getLogger(__name__)


class EngineConfig(BaseModel):
    """Engine settings; CLI flags override the environment, which overrides these defaults."""

    gen_cap: int = DEFAULT_GEN_CAP
    max_p: int = 24
    min_q: int = -16
    max_q: int = 2
    hopf_weight_cap: int = 12
    action_weight_cap: int = 10
    samples: int = 200
    seed: int = 2024
    lift_check: str = "sampled"
    lift_check_rate: int = 16
    cache_dir: str = DEFAULT_CACHE_DIR
    log_level: str = "WARNING"

    @property
    def window(self) -> Window:
        return Window(max_p=self.max_p, min_q=self.min_q, max_q=self.max_q)

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None, **overrides) -> "EngineConfig":
        env = os.environ if environ is None else environ
        values: Dict[str, object] = {}
        if env.get("WSTEEN_CACHE"):
            values["cache_dir"] = env["WSTEEN_CACHE"]
        if env.get("WSTEEN_DEBUG") == "1":
            values["lift_check"] = "always"
        if env.get("WSTEEN_LOG_LEVEL"):
            values["log_level"] = env["WSTEEN_LOG_LEVEL"].upper()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class PresetEngines:
    """Everything built over one preset, created on first use."""

    def __init__(self, preset: FieldPreset, config: EngineConfig):
        self.preset = preset
        self.config = config
        self.algebra = DualSteenrod(preset, config.gen_cap)
        self.shadows = ShadowModules(self.algebra, LiftCheck(config.lift_check, config.lift_check_rate))
        self.engine = HomologyEngine(self.shadows, config.window)
        self._kwhw: Optional[KWHWModel] = None
        self._pairs: Optional[PairModel] = None
        self._local: Optional[LocalAlgebra] = None

    @property
    def kwhw(self) -> KWHWModel:
        if self._kwhw is None:
            self._kwhw = KWHWModel(self.shadows)
        return self._kwhw

    @property
    def pairs(self) -> PairModel:
        if self._pairs is None:
            self._pairs = PairModel(self.kwhw)
        return self._pairs

    @property
    def local(self) -> LocalAlgebra:
        if self._local is None:
            self._local = local_algebra(self.kwhw)
        return self._local

    def parse(self, text: str) -> AElement:
        return parse_expr(self.algebra, text)


class WsteenService:
    def __init__(self, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig.from_env()
        self._engines: Dict[str, PresetEngines] = {}
        self._cache: Optional[ResultCache] = None

    @property
    def cache(self) -> ResultCache:
        if self._cache is None:
            self._cache = ResultCache(self.config.cache_dir)
        return self._cache

    def engines(self, field: str) -> PresetEngines:
        engines = self._engines.get(field)
        if engines is None:
            preset = resolve_preset(field)
            logger.debug("building engines for %s (gen cap %d)", preset.name, self.config.gen_cap)
            engines = PresetEngines(preset, self.config)
            self._engines[field] = engines
        return engines

    # --- basis ---

    def basis(self, obj: str, field: str, b: Bidegree, use_cache: bool = True) -> BasisReport:
        if obj not in BASIS_OBJECTS:
            raise InvalidArgument(f"unknown object {obj!r}; expected one of {', '.join(BASIS_OBJECTS)}")
        key = cache_key("basis", field, obj, str(b), str(self.config.gen_cap))
        if use_cache:
            entry = self.cache.get(key)
            if entry is not None:
                return BasisReport(**entry.payload)
        engines = self.engines(field)
        names = BASIS_OBJECTS[obj](engines, b)
        report = BasisReport(object=obj, field=engines.preset.name, p=b.p, q=b.q, dim=len(names), basis=names)
        if use_cache:
            self.cache.put(key, "basis", report.model_dump())
        return report

    # --- actions ---

    def act(self, field: str, op: str, side: str, text: str, hw: bool = False) -> Dict[str, str]:
        engines = self.engines(field)
        x = engines.parse(text)
        if hw:
            x = engines.shadows.hw_expand(x).element
        result = engines.algebra.act(SteenrodOp(op), Side(side), x)
        return {"input": str(x), "op": op, "side": side, "result": str(result)}

    # --- pairs ---

    def pair(self, field: str, generator: Optional[str] = None, index_set: str = "",
             a: Optional[str] = None, torsion: Optional[str] = None) -> Dict[str, object]:
        engines = self.engines(field)
        pairs = engines.pairs
        if generator:
            value = pairs.theorem_generator(generator, IndexSet.parse(index_set) if index_set else None)
        else:
            if a is None:
                raise InvalidArgument("pair needs --generator or --a")
            b = engines.kwhw.torsion(engines.parse(torsion)) if torsion else engines.kwhw.zero()
            value = pairs.make_pair(engines.parse(a), b)
        return {
            "field": engines.preset.name,
            "a": str(value.a),
            "b": str(value.b),
            "residue": str(engines.shadows.to_kmhw(value.a)),
        }

    # --- verification ---

    def verify(self, suite: str, field: str, use_cache: bool = True, **params) -> VerificationReport:
        engines = self.engines(field)
        report = run_suite(suite, engines, **params)
        if use_cache and suite in SUITES:
            shown = json.dumps(report.parameters, sort_keys=True, default=str)
            key = cache_key("verify", engines.preset.name, suite, extra=shown)
            self.cache.put(key, "verify", report.model_dump())
            self.cache.remember(report_name(suite, engines.preset.name), key)
        return report

    def stored_report(self, suite: str, field: str) -> Optional[VerificationReport]:
        entry = self.cache.lookup(report_name(suite, resolve_preset(field).name))
        return VerificationReport(**entry.payload) if entry else None


def report_name(suite: str, field: str) -> str:
    return f"verify:{suite}:{field}"


def _dual_steenrod(engines: PresetEngines, b: Bidegree) -> List[str]:
    A = engines.algebra
    return [A.format_monomial(m) for m in A.basis(b)]


def _h_hw(engines: PresetEngines, b: Bidegree) -> List[str]:
    sh = engines.shadows
    return [sh.format_hw_key(k) for k in sh.hw_keys(b)]


def _h_km(engines: PresetEngines, b: Bidegree) -> List[str]:
    A = engines.algebra
    return [A.format_monomial(m) for m in engines.shadows.hkm_basis(b)]


def _km_hw(engines: PresetEngines, b: Bidegree) -> List[str]:
    sh = engines.shadows
    return [sh.format_kmhw_key(k) for k in sh.kmhw_basis(b)]


def _h_kw(engines: PresetEngines, b: Bidegree) -> List[str]:
    sh = engines.shadows
    return [sh.format_hkw_key(k) for k in sh.hkw_presentation_basis(b)]


BASIS_OBJECTS: Dict[str, Callable[[PresetEngines, Bidegree], List[str]]] = {
    "dual-steenrod": _dual_steenrod,
    "h-hw": _h_hw,
    "h-km": _h_km,
    "km-hw": _km_hw,
    "h-kw": _h_kw,
}
