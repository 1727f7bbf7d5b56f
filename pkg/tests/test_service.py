import os

import pytest

from wsteen.models.errors import IncompatiblePair, InvalidArgument, PresetError
from wsteen.models.grading import Bidegree
from wsteen.models.service import BASIS_OBJECTS, EngineConfig, report_name


def test_config_from_environment():
    env = {"WSTEEN_CACHE": "/tmp/ws", "WSTEEN_DEBUG": "1", "WSTEEN_LOG_LEVEL": "info"}
    config = EngineConfig.from_env(env, samples=5, seed=None)
    assert config.cache_dir == "/tmp/ws"
    assert config.lift_check == "always"
    assert config.log_level == "INFO"
    assert config.samples == 5
    assert config.seed == 2024


def test_config_defaults():
    config = EngineConfig.from_env({})
    assert config.lift_check == "sampled"
    assert config.window.max_p == 24
    assert config.gen_cap == 6


def test_engines_are_built_once(service):
    assert service.engines("qcl") is service.engines("qcl")
    with pytest.raises(PresetError):
        service.engines("reals")


def test_basis_names_parse_back(service):
    report = service.basis("dual-steenrod", "qcl", Bidegree(3, 1))
    engines = service.engines("qcl")
    monomials = engines.algebra.basis(Bidegree(3, 1))
    assert report.dim == len(monomials) == 2
    for name, m in zip(report.basis, monomials):
        assert engines.parse(name) == engines.algebra.element([m])


def test_basis_is_cached(service):
    first = service.basis("dual-steenrod", "qcl", Bidegree(1, 0))
    assert first.basis == ["t0"]
    assert os.listdir(service.config.cache_dir)
    assert service.basis("dual-steenrod", "qcl", Bidegree(1, 0)) == first


def test_every_basis_object(service):
    for obj in BASIS_OBJECTS:
        report = service.basis(obj, "qcl", Bidegree(0, 0), use_cache=False)
        assert report.basis == ["1"]


def test_unknown_basis_object(service):
    with pytest.raises(InvalidArgument):
        service.basis("steenrod", "qcl", Bidegree(0, 0))


def test_act(service):
    payload = service.act("qcl", "Sq2", "left", "t1")
    assert payload["result"] == "t0"
    assert service.act("qcl", "Sq2", "right", "xb1")["result"] == "1"


def test_act_with_subalgebra_expansion(service):
    assert service.act("qcl", "Sq1", "right", "t0", hw=True)["result"] == "1"


def test_pair_generators(service):
    payload = service.pair("qcl", generator="t")
    assert payload["a"] == "tau"
    assert payload["b"] == "0"
    assert service.pair("qcl", generator="c1", index_set="{2}")["field"] == "qcl"


def test_pair_from_components(service):
    payload = service.pair("qcl", a="t0", torsion="t0")
    assert payload["a"] == "t0"
    assert payload["residue"] == "t0"


def test_incompatible_pair(service):
    with pytest.raises(IncompatiblePair):
        service.pair("qcl", a="t0")
    with pytest.raises(InvalidArgument):
        service.pair("qcl")


def test_verify_stores_the_report(service):
    report = service.verify("lemma-c", "qcl", max_index=2)
    assert report.all_passed
    assert report_name("lemma-c", "qcl") in service.cache.names()
    stored = service.stored_report("lemma-c", "qcl")
    assert stored.stable_dump() == report.stable_dump()
    assert service.stored_report("action", "qcl") is None


def test_verify_without_cache(service):
    service.verify("lemma-c", "qcl", use_cache=False, max_index=2)
    assert service.cache.names() == []
