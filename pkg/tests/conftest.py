import pytest

from check_flags import CheckFlags
from interval_modules import IntervalModel
from quiver_algebra import linear_quiver, load_algebra
from two_term import TwoTermModel

POINT_SPEC = "vertices: 1\n"
LOCAL_SPEC = "vertices: 1\narrows: x: 1 -> 1\nrelations: x.x = 0\n"
A2_SPEC = "vertices: 1 2\narrows: a1: 1 -> 2\n"

# mod of the A_2 path algebra: n = P1 = I2, p = P2 = S2, i = I1 = S1
MOD_LAMBDA2 = """\
bound 1
object n proj inj
object p proj
object i inj
hom n n = 1
hom p p = 1
hom i i = 1
hom p n = 1
hom n i = 1
ext i p = 1
middle i p [1] = n
"""


@pytest.fixture(autouse=True)
def reset_check_flags():
    """Every test starts from the default check flags."""
    CheckFlags.reset()
    yield
    CheckFlags.reset()


@pytest.fixture(scope="session")
def point():
    """Two-term category of the field."""
    return TwoTermModel(load_algebra(POINT_SPEC))


@pytest.fixture(scope="session")
def local():
    """Two-term category of k[x]/(x^2)."""
    return TwoTermModel(load_algebra(LOCAL_SPEC))


@pytest.fixture(scope="session")
def a2():
    """Two-term category of the A_2 path algebra."""
    return TwoTermModel(linear_quiver(2))


@pytest.fixture(scope="session")
def lam2():
    return IntervalModel(2)


@pytest.fixture(scope="session")
def lam3():
    return IntervalModel(3)


@pytest.fixture
def tabulated_file(tmp_path):
    """mod(Lambda_2) in the tabulated text format."""
    path = tmp_path / "lambda2.tab"
    path.write_text(MOD_LAMBDA2)
    return path


@pytest.fixture
def algebra_file(tmp_path):
    path = tmp_path / "a2.alg"
    path.write_text(A2_SPEC)
    return path


@pytest.fixture
def lambda2_text():
    return MOD_LAMBDA2
