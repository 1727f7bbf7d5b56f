import json
import os

from wsteen.models.cache_store import ResultCache, cache_key
from wsteen.models.reports import CheckRecord, VerificationReport


def test_cache_key_depends_on_every_part():
    base = cache_key("basis", "qcl", "dual-steenrod", "(1,0)", "6")
    assert base == cache_key("basis", "qcl", "dual-steenrod", "(1,0)", "6")
    assert base != cache_key("basis", "fq3", "dual-steenrod", "(1,0)", "6")
    assert base != cache_key("basis", "qcl", "dual-steenrod", "(1,0)", "7")
    assert len(base) == 64


def test_put_then_get(tmp_path):
    cache = ResultCache(str(tmp_path / "cache"))
    key = cache_key("basis", "qcl", "h-km", "(0,0)")
    assert cache.get(key) is None
    cache.put(key, "basis", {"basis": ["1"]})
    assert ResultCache(cache.root).get(key).payload == {"basis": ["1"]}


def test_index_survives_reload(tmp_path):
    root = str(tmp_path / "cache")
    cache = ResultCache(root)
    key = cache_key("verify", "qcl", "d-squared")
    cache.put(key, "verify", {"suite": "d-squared"})
    cache.remember("verify:d-squared:qcl", key)
    reloaded = ResultCache(root)
    assert reloaded.names() == ["verify:d-squared:qcl"]
    assert reloaded.lookup("verify:d-squared:qcl").payload["suite"] == "d-squared"
    assert reloaded.lookup("verify:other:qcl") is None


def test_corrupt_files_are_ignored(tmp_path):
    root = tmp_path / "cache"
    root.mkdir()
    (root / "index.json").write_text("{not json", encoding="utf-8")
    cache = ResultCache(str(root))
    assert cache.names() == []
    key = cache_key("basis", "qcl", "h-hw")
    (root / f"{key}.json").write_text("[]", encoding="utf-8")
    assert cache.get(key) is None


def test_entries_with_a_foreign_key_are_ignored(tmp_path):
    cache = ResultCache(str(tmp_path))
    key = cache_key("basis", "qcl", "h-hw")
    other = cache_key("basis", "fq3", "h-hw")
    cache.put(other, "basis", {})
    os.replace(tmp_path / f"{other}.json", tmp_path / f"{key}.json")
    assert cache.get(key) is None


def test_clear(tmp_path):
    cache = ResultCache(str(tmp_path / "cache"))
    key = cache_key("basis", "qcl", "h-hw")
    cache.put(key, "basis", {})
    cache.remember("basis", key)
    assert cache.clear() == 2
    assert cache.names() == []
    assert ResultCache(str(tmp_path / "missing")).clear() == 0


def test_reports_round_trip_through_the_cache(tmp_path):
    report = VerificationReport(suite="d-squared", field="qcl")
    report.add(CheckRecord(name="ok", passed=True))
    report.add(CheckRecord(name="bad", passed=False, detail="x"))
    assert not report.all_passed
    assert [r.name for r in report.failures()] == ["bad"]
    cache = ResultCache(str(tmp_path))
    key = cache_key("verify", "qcl", "d-squared")
    cache.put(key, "verify", report.model_dump())
    restored = VerificationReport(**cache.get(key).payload)
    assert restored.stable_dump() == report.stable_dump()
    assert "elapsed_ms" not in report.stable_dump()
    with open(tmp_path / f"{key}.json", encoding="utf-8") as f:
        assert json.load(f)["kind"] == "verify"
