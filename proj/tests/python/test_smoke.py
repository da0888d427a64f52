import json
import math

import pytest

import csrkit


def fitted(kind="svm", kernel=None, C=1.0, seed=3):
    X, y = csrkit.gen_two_gaussians(600, seed=seed, outlier_prob=0.1, cov_safe=1.0, cov_unsafe=1.0)
    cfg = csrkit.TrainConfig(kind=kind, kernel=kernel or csrkit.GaussianKernel(0.5), C=C)
    model = csrkit.train(X[:200], y[:200], cfg)
    profile = csrkit.calibrate(model, X[200:400], y[200:400])
    return model, profile, X[400:], y[400:]


def test_generators_are_deterministic():
    assert csrkit.gen_two_gaussians(50, seed=1) == csrkit.gen_two_gaussians(50, seed=1)
    X, y = csrkit.gen_dns_surrogate(40, seed=2, intensity=3.0)
    assert len(X) == 40 and len(X[0]) == 12
    assert set(y) <= {-1, 1}


@pytest.mark.parametrize(
    "kind,kernel,C",
    [("svm", None, 1.0), ("svdd", None, 0.05), ("lr", csrkit.PolynomialKernel(3, 1.0, 1.0), 1.0)],
)
def test_pipeline_and_axioms(kind, kernel, C):
    model, profile, X, y = fitted(kind, kernel, C)
    assert model.kind == kind
    x = X[0]
    r = model.rho_bar(x)
    assert abs(model.predictor(x, r)) <= 1e-9
    assert model.predictor(x, r + 0.1) > model.predictor(x, r)

    reports = csrkit.sweep(model, profile, [0.1, 0.2, 0.3], X, y)
    assert [rep["epsilon"] for rep in reports] == [0.1, 0.2, 0.3]
    for rep in reports:
        assert rep["empty_rate"] + rep["double_rate"] + rep["single_rate"] == pytest.approx(1.0)
        assert rep["csr_error_coverage"] <= rep["csr_mass"]
    assert csrkit.evaluate(model, profile, 0.2, X, y) == reports[1]

    for eps in (0.1, 0.3):
        for point in X[:50]:
            if csrkit.in_safe_region(model, profile, eps, point):
                assert csrkit.in_sigma(model, profile, eps, point)


def test_quantile_and_conformal_set():
    profile = csrkit.CalibrationProfile([0.9, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    assert csrkit.quantile(profile, 0.5) == 0.5
    assert math.isinf(csrkit.quantile(csrkit.CalibrationProfile([1.0, 2.0, 3.0, 4.0]), 0.1))
    model, profile, X, _ = fitted()
    assert set(csrkit.conformal_set(model, profile, 0.2, X[0])) <= {-1, 1}


def test_model_json_round_trip():
    model, _, X, _ = fitted()
    back = csrkit.ScalableModel.from_json(model.to_json())
    assert back.to_json() == model.to_json()
    assert back.rho_bar(X[0]) == model.rho_bar(X[0])
    assert json.loads(model.to_json())["format"] == "csrkit-model"


def test_region_grid_shape():
    model, profile, _, _ = fitted()
    cells = csrkit.region_grid(model, profile, 0.2, [-2.0, 2.0, -2.0, 2.0], 4)
    assert len(cells) == 16
    assert cells[0][2] in {"plus", "minus", "double", "empty"}


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        csrkit.TrainConfig(C=-1.0)
    with pytest.raises(csrkit.InputError):
        csrkit.quantile(csrkit.CalibrationProfile([1.0]), 1.5)
    with pytest.raises(csrkit.TrainingError):
        csrkit.train([[0.0, 0.0], [1.0, 1.0]], [-1, -1], csrkit.TrainConfig(kind="svdd"))
    X, y = csrkit.gen_two_gaussians(100, seed=1)
    with pytest.raises(csrkit.ConvergenceError):
        csrkit.train(X, y, csrkit.TrainConfig(kernel=csrkit.GaussianKernel(0.5), max_iterations=1))
