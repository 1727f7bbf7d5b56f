import pytest

from wsteen.models.field_data import FQ1, FQ3, QCL, load_custom_preset
from wsteen.models.homology_engine import HomologyEngine, Window
from wsteen.models.milnor_dual import DualSteenrod
from wsteen.models.service import EngineConfig, PresetEngines, WsteenService
from wsteen.models.shadow_modules import ShadowModules

SMALL_WINDOW = Window(max_p=8, min_q=-2, max_q=4)


@pytest.fixture(scope="session")
def qcl_algebra():
    return DualSteenrod(QCL)


@pytest.fixture(scope="session")
def fq3_algebra():
    return DualSteenrod(FQ3)


@pytest.fixture(scope="session")
def fq1_algebra():
    return DualSteenrod(FQ1)


@pytest.fixture(scope="session")
def qcl_shadows(qcl_algebra):
    return ShadowModules(qcl_algebra)


@pytest.fixture(scope="session")
def fq3_shadows(fq3_algebra):
    return ShadowModules(fq3_algebra)


@pytest.fixture(scope="session")
def qcl_engine(qcl_shadows):
    return HomologyEngine(qcl_shadows, SMALL_WINDOW)


@pytest.fixture(scope="session")
def engines_by_field():
    config = EngineConfig(max_p=SMALL_WINDOW.max_p, min_q=SMALL_WINDOW.min_q, max_q=SMALL_WINDOW.max_q, samples=20)
    cache = {}

    def build(preset):
        if preset.name not in cache:
            cache[preset.name] = PresetEngines(preset, config)
        return cache[preset.name]

    return build


@pytest.fixture(scope="session")
def qcl_engines(engines_by_field):
    return engines_by_field(QCL)


@pytest.fixture(scope="session")
def fq3_engines(engines_by_field):
    return engines_by_field(FQ3)


@pytest.fixture(scope="session")
def fq1_engines(engines_by_field):
    return engines_by_field(FQ1)


@pytest.fixture
def custom_preset_file(tmp_path):
    path = tmp_path / "cube.txt"
    path.write_text("# rho with rho^4 = 0\nrho_nilpotence: 4\nclasses: a\nvanishing: a*a\n", encoding="utf-8")
    return path


@pytest.fixture
def custom_preset(custom_preset_file):
    return load_custom_preset(str(custom_preset_file))


@pytest.fixture
def service(tmp_path):
    config = EngineConfig(
        cache_dir=str(tmp_path / "cache"),
        max_p=SMALL_WINDOW.max_p,
        min_q=SMALL_WINDOW.min_q,
        max_q=SMALL_WINDOW.max_q,
        samples=20,
    )
    return WsteenService(config)
