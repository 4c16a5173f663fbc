from hypothesis import given

from epkit.audit import AuditReport, AuditRow, AuditViolation, implication_audit
from epkit.matrix import Matrix
from epkit.polynomial import Polynomial
from epkit.scalar import Gaussian

from conftest import low_rank_exact, polynomials


def test_example1_rows(ex1, p1):
    r = implication_audit(ex1, p1, n=3)
    assert r.ok and r.count("fail") == 0
    row = r.row("HEP=>p-HEP")
    assert row.hypothesis is False and row.status == "vacuous"
    for k in (1, 2, 3):
        assert r.row(f"p-HEP=>p_k-HEP[k={k}]").status == "pass"


def test_hermitian_all_pass():
    H = Matrix([[2, Gaussian(1, 1), 0], [Gaussian(1, -1), 1, 0], [0, 0, 0]])
    r = implication_audit(H, Polynomial([0, 2, Gaussian(0, 1)]), n=2)
    assert r.ok
    assert r.row("EP=>p-EP").status == "pass"
    assert r.row("HEP=>p-HEP").status == "pass"


def test_m_ep_row():
    N2 = Matrix([[0, 1], [0, 0]])
    # k = 2 for t^3 + t^2, and N2 is 2-EP because its square vanishes
    r = implication_audit(N2, Polynomial([0, 0, 1, 1]), n=3)
    assert r.row("2-EP=>p-EP[m<=k]").status == "pass"
    assert r.row("3-EP=>p-EP[m<=k]").status == "n/a"
    assert r.ok


def test_p0_rows_not_applicable(ex2, p2):
    r = implication_audit(ex2, p2, n=1)
    assert r.row("[P,p(T)+T^+]=0=>p-HEP").status == "n/a"
    assert r.ok


def test_strict_raises_with_state():
    row = AuditRow("demo", True, False, "fail")
    report = AuditReport(Matrix([[1]]), Polynomial([0, 1]), 1, [row], row)
    exc = AuditViolation(report)
    assert "demo" in str(exc) and exc.report.T == Matrix([[1]])


@given(low_rank_exact(max_dim=4), polynomials(max_degree=4, vanish_at_zero=True))
def test_no_violations_random(T, p):
    r = implication_audit(T, p, n=2, strict=True)
    assert r.ok and r.count("fail") == 0
