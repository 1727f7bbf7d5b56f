import pytest

from wsteen.models.errors import ExpressionSyntaxError, GeneratorCapExceeded, InvalidArgument, PresetMismatch
from wsteen.models.expressions import parse_expr
from wsteen.models.grading import Bidegree
from wsteen.models.milnor_dual import Side, SteenrodOp


def test_generator_bidegrees(qcl_algebra):
    A = qcl_algebra
    assert A.bidegree(A.pure(E=(1,))) == Bidegree(1, 0)
    assert A.bidegree(A.pure(R=(1,))) == Bidegree(2, 1)
    assert A.bidegree(A.pure(E=(0, 1))) == Bidegree(3, 1)
    assert A.tau().bidegrees() == [Bidegree(0, -1)]


def test_rho_bidegree(fq3_algebra):
    assert fq3_algebra.rho().bidegrees() == [Bidegree(-1, -1)]


def test_rho_is_zero_over_qcl(qcl_algebra):
    assert qcl_algebra.rho().is_zero()


def test_tau0_squared_over_fq3(fq3_algebra):
    A = fq3_algebra
    assert parse_expr(A, "t0^2") == parse_expr(A, "rho*t1 + tau*x1 + rho*t0*x1")


def test_tau1_squared_over_qcl(qcl_algebra):
    A = qcl_algebra
    assert A.tau_i(1) * A.tau_i(1) == A.tau() * A.xi(2)


def test_right_unit_twists_tau(fq3_algebra):
    A = fq3_algebra
    assert A.right_scale(A.one(), A.tau()) == A.tau() + A.rho() * A.tau_i(0)
    assert A.eta_right(A.rho()) == A.rho()


def test_right_scale_rejects_non_scalars(fq3_algebra):
    A = fq3_algebra
    with pytest.raises(InvalidArgument):
        A.right_scale(A.one(), A.tau_i(0))


def test_coproduct_of_xi2(qcl_algebra):
    A = qcl_algebra
    one = A.unit_monomial
    x1, x1_sq, x2 = A.pure(R=(1,)), A.pure(R=(2,)), A.pure(R=(0, 1))
    expected = A.tensor([(x2, one), (one, x2), (x1_sq, x1)])
    assert A.coproduct(A.xi(2)) == expected


def test_coproduct_of_unit(fq3_algebra):
    assert fq3_algebra.coproduct(fq3_algebra.one()) == fq3_algebra.tensor_unit()


@pytest.mark.parametrize("text", ["t1", "x2", "tau*t0", "t0*x1 + rho*t2"])
def test_coassociativity(fq3_algebra, text):
    x = parse_expr(fq3_algebra, text)
    assert fq3_algebra.coproduct_left(x) == fq3_algebra.coproduct_right(x)


@pytest.mark.parametrize("text", ["t1", "x2", "tau*t0", "rho*x1^2"])
def test_counits(fq3_algebra, text):
    A = fq3_algebra
    x = parse_expr(A, text)
    assert A.counit_left(A.coproduct(x)) == x
    assert A.counit_right(A.coproduct(x)) == x


def test_conjugation_values(fq3_algebra):
    A = fq3_algebra
    assert A.conjugate(A.tau()) == A.tau() + A.rho() * A.tau_i(0)
    assert A.conjugate(A.xi(2)) == A.xi(2) + A.power(A.xi(1), 3)
    assert parse_expr(A, "xb2") == parse_expr(A, "x2 + x1^3")


@pytest.mark.parametrize("text", ["t1", "x2", "tau*t0", "t0*t1 + x1^2"])
def test_conjugation_is_an_involution(fq3_algebra, text):
    x = parse_expr(fq3_algebra, text)
    assert fq3_algebra.conjugate(fq3_algebra.conjugate(x)) == x


def test_kronecker_pairing(fq3_algebra):
    A = fq3_algebra
    sq1 = A.dual_monomial(SteenrodOp.SQ1)
    assert A.kronecker(sq1, A.tau_i(0)) == A.one()
    assert A.kronecker(sq1, A.tau()).is_zero()
    assert A.kronecker(sq1, A.conjugate(A.tau())) == A.rho()


def test_right_action_values(qcl_algebra):
    A = qcl_algebra
    assert A.act(SteenrodOp.SQ2, Side.RIGHT, A.xi_bar(1)) == A.one()
    assert A.act(SteenrodOp.SQ1, Side.RIGHT, A.tau_i(0)) == A.one()


def test_left_action_values(qcl_algebra):
    A = qcl_algebra
    assert A.act(SteenrodOp.SQ2, Side.LEFT, A.tau_i(1)) == A.tau_i(0)
    assert A.act(SteenrodOp.SQ2, Side.LEFT, A.tau_i(0)).is_zero()
    assert A.act(SteenrodOp.SQ2, Side.LEFT, A.tau_i(2)).is_zero()


def test_action_accepts_string_flags(qcl_algebra):
    A = qcl_algebra
    assert A.act("Sq2", "left", A.tau_i(1)) == A.tau_i(0)


def test_small_bases(qcl_algebra):
    A = qcl_algebra
    assert A.basis(Bidegree(0, 0)) == (A.unit_monomial,)
    assert A.basis(Bidegree(1, 0)) == (A.pure(E=(1,)),)
    assert A.basis(Bidegree(2, 1)) == (A.pure(R=(1,)),)
    assert [A.format_monomial(m) for m in A.basis(Bidegree(0, -1))] == ["tau"]


def test_generator_cap(qcl_algebra):
    with pytest.raises(GeneratorCapExceeded):
        qcl_algebra.tau_i(7)


def test_mixing_presets_is_rejected(qcl_algebra, fq3_algebra):
    with pytest.raises(PresetMismatch):
        qcl_algebra.tau() + fq3_algebra.tau()


@pytest.mark.parametrize("text", ["", "t0 +", "foo", "x0", "(t0", "t0 ^ x1", "t0 $ t1"])
def test_parse_errors(qcl_algebra, text):
    with pytest.raises(ExpressionSyntaxError):
        parse_expr(qcl_algebra, text)


def test_parse_reads_integers_mod_two(qcl_algebra):
    A = qcl_algebra
    assert parse_expr(A, "2").is_zero()
    assert parse_expr(A, "3*t0") == A.tau_i(0)
    assert parse_expr(A, "t0 + t0").is_zero()


def test_format_round_trips_through_parse(fq3_algebra):
    A = fq3_algebra
    x = parse_expr(A, "rho*tau*t1 + x1^2*t0")
    assert parse_expr(A, str(x)) == x
