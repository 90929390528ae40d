import numpy as np
import pytest

from ias.errors import FitDegenerateError, ParameterError
from ias.gallery import get_example
from ias.verify import (AsymptoticFit, VerificationReport, asymptotic_fit, fold_margin_mask,
                        hessian_residual, resolution_tolerance, structure_residuals, verify_mesh)
from ias.weier import DomainSpec, eval_surface


def mesh_of(name, n=64, **kw):
    d = get_example(name, **kw)
    return eval_surface(type(d)(d.G, d.F, d.eps, d.domain.with_resolution(n, n), d.punctures, d.name))


def test_tolerance_table():
    assert resolution_tolerance((64, 64)) == 1e-3
    assert resolution_tolerance((128, 100)) == 2.5e-4
    assert resolution_tolerance((256, 256)) == 1e-4
    assert resolution_tolerance((512, 512)) == pytest.approx(2.5e-5)


@pytest.mark.parametrize("eps", [1, -1])
def test_paraboloid_hessian_exact(eps):
    rep = hessian_residual(mesh_of("paraboloid", 64, eps=eps))
    assert rep.passed and rep["hessian"].max <= 1e-10


def test_quadratic_fit_option_runs():
    rep = hessian_residual(mesh_of("paraboloid", 48), k=12, half_window=2, degree=2)
    assert rep["hessian"].max <= 1e-10
    with pytest.raises(ParameterError):
        hessian_residual(mesh_of("paraboloid", 16), k=40)


def test_hessian_converges_on_rotational():
    # away from the fold the residual shrinks under refinement
    d = get_example("rotational", domain=DomainSpec.annulus(1.5, 3.0))
    errs = []
    for n in (128, 256):
        m = eval_surface(type(d)(d.G, d.F, 1, d.domain.with_resolution(n, n)))
        errs.append(hessian_residual(m, margin=0)["hessian"].max)
    assert errs[0] / errs[1] > 2.0


@pytest.mark.parametrize("name", ["paraboloid", "rotational", "two_end", "one_end",
                                  "helicoidal", "multivalued", "punctured_split"])
def test_structure_relations_pass(name):
    rep = structure_residuals(mesh_of(name, 64))
    assert rep.passed, rep.to_text()
    info = rep["height_form_convention"]
    assert info.informational and info.passed


def test_fold_margin_excludes_circle():
    m = mesh_of("rotational", 64)
    keep = fold_margin_mask(m, 3)
    assert not keep[m.singular].any()
    assert keep.sum() < keep.size


def test_report_formats():
    rep = verify_mesh(mesh_of("paraboloid", 32))
    csv = rep.to_csv().splitlines()
    assert csv[0] == "check,max,mean,n,tol,pass"
    assert any(line.startswith("hessian,") for line in csv)
    assert "PASS hessian" in rep.to_text()
    assert isinstance(rep + VerificationReport([]), VerificationReport)
    with pytest.raises(KeyError):
        rep["missing"]


def test_failure_names_worst_sample():
    m = mesh_of("one_end", 64)
    rep = hessian_residual(m, tol=1e-12)
    assert not rep.passed
    i, k = rep["hessian"].worst
    assert 0 <= i < 64 and 0 <= k < 64


def _far(name, r_out, **kw):
    return eval_surface(get_example(name, domain=DomainSpec.annulus(0.25, r_out, (96, 64)), **kw))


def test_asymptotic_fit_paraboloid_exact():
    fit = asymptotic_fit(_far("paraboloid", 3.0, params={"k": 0}))
    assert abs(fit.a) <= 1e-8
    # the constant depends on the base point; the rest is (x^2 + y^2)/2
    assert np.allclose(fit.E[1:], [0, 0, 0.5, 0, 0.5], atol=1e-8)


def test_asymptotic_fit_rotational():
    fits = [asymptotic_fit(_far("rotational", r)) for r in (10, 20, 100)]
    assert isinstance(fits[0], AsymptoticFit)
    assert fits[1].residual < fits[0].residual
    # log coefficient tends to -Re Res(F G') = -1
    assert fits[2].a == pytest.approx(-1.0, abs=1e-3)


# frozen from asymptotic_fit on annulus(0.25, 100), 96x64 samples
TWO_END_LOG_COEFFICIENT = -0.00148223051863175


def test_asymptotic_fit_two_end_regression():
    fit = asymptotic_fit(_far("two_end", 100.0))
    assert fit.a == pytest.approx(TWO_END_LOG_COEFFICIENT, abs=1e-9)


def test_asymptotic_fit_rejects():
    with pytest.raises(ParameterError):
        asymptotic_fit(mesh_of("paraboloid", 32))
    with pytest.raises(ParameterError):
        asymptotic_fit(mesh_of("multivalued", 32))
    m = mesh_of("two_end", 32, params={"a": 0.5})
    m.psi[..., :2] = 0.0
    with pytest.raises(FitDegenerateError):
        asymptotic_fit(m)
    _ = np
