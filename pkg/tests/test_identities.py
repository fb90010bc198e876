"""The exact identity registry: every asserted identity has a zero residual,
the variable-change consistency check holds at several zeta values, and the
reports serialize deterministically."""

import json
import time
from fractions import Fraction as F

import pytest

from susy2d import identities as ident


def test_registry_is_nonempty_and_sorted():
    names = ident.identity_names()
    assert len(names) >= 60
    assert names == sorted(names)
    prefixes = {n.split(".")[0] for n in names}
    assert prefixes == {"ho", "ha", "gen"}


def test_every_asserted_identity_is_exactly_zero():
    for report in ident.verify_all():
        if report.asserted:
            assert report.passed, report.name
            assert report.residual_terms == 0, report.name


def test_on_shell_only_identity_reports_without_asserting():
    report = ident.verify_identity("ha.g-su2")
    assert not report.asserted
    # the symbolic residual is genuinely nonzero (it vanishes only on-shell),
    # so the report records a nonzero residual; the suite verdict skips it
    # because the identity is not asserted
    assert report.residual_terms > 0
    assert not report.passed


@pytest.mark.parametrize("zeta", [F(1), F(3, 2), F(2), F(3)])
def test_transform_check(zeta):
    report = ident.transform_check(zeta)
    assert report.passed
    assert report.residual_terms == 0
    assert "/" not in report.name


def test_transform_check_rejects_nonpositive_zeta():
    with pytest.raises(ValueError):
        ident.transform_check(F(-1))


def test_pullback_reduces_to_identity_at_zeta_two():
    # at zeta = 2, A = 1/2 the variable change is trivial (y = rho, theta = phi)
    from susy2d import systems as sy

    op = sy.build("ho", "O+")
    back = ident.pullback_to_radial(op, zeta=F(2)).substitute("A", 1)
    assert back == op.canonical()


def test_reports_serialize_deterministically():
    a = [r.to_json_dict() for r in ident.verify_all()]
    b = [r.to_json_dict() for r in ident.verify_all()]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_full_registry_runtime_budget():
    start = time.monotonic()
    reports = ident.verify_all()
    for z in (F(1), F(3, 2), F(2), F(3)):
        reports.append(ident.transform_check(z))
    elapsed = time.monotonic() - start
    assert all(r.passed for r in reports if r.asserted)
    assert elapsed <= 10.0, f"symbolic suite took {elapsed:.1f}s"
