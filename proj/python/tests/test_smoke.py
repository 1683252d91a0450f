import json
import math
import pathlib

import pytest

import subdiff

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def vertex_sets(union):
    return sorted(sorted(tuple(v) for v in piece["vertices"]) for piece in union)


def test_minmax_outer_limit():
    result = subdiff.outer(FIXTURES / "minmax.json", closure=True)
    assert vertex_sets(result["outer_limit"]) == [
        [("0", "-1"), ("2", "1")],
        [("0", "1"), ("2", "1")],
        [("2", "-1")],
    ]


def test_marco_family_is_one_based():
    result = subdiff.dfamily(FIXTURES / "marco.json")
    assert [s["D"] for s in result["d_family"]] == [[1], [2], [4], [5], [1, 2], [1, 5], [4, 5]]


def test_gradient_document_and_dict_input():
    result = subdiff.dfamily({"gradients": [["1/2", "1/2"], [1, 1]]})
    assert [s["D"] for s in result["d_family"]] == [[2]]


def test_erbound_abs_empirical():
    result = subdiff.erbound(FIXTURES / "abs.json", empirical=True)
    assert result["empirical"]["er_estimate"] == pytest.approx(1.0, abs=1e-3)
    assert result["inequality"]["satisfied"] is True


def test_paraboloids_infinite_bound():
    result = subdiff.erbound(FIXTURES / "paraboloids.json")
    assert result["lower_bound"]["infinite"] is True


def test_oracle_records_seed_and_clusters():
    result = subdiff.oracle(FIXTURES / "paraboloids.json", dirs=500, seed=3)
    assert result["seed"] == 3
    for x, y in result["cloud"]:
        assert min(math.hypot(x - 1, y), math.hypot(x + 2, y)) < 1e-2


def test_errors_map_to_python_exceptions():
    with pytest.raises(subdiff.ParseError):
        subdiff.outer('{"dim": 2, "basepoint": [0, 0] "components": []}')
    cube = {"dim": 3, "basepoint": [0, 0, 0],
            "components": [{"type": "max_affine", "pieces": [{"a": [1, 0, 0], "b": 0}]}]}
    with pytest.raises(subdiff.UnsupportedDimensionError):
        subdiff.outer(cube)
    with pytest.raises(subdiff.EnumerationCapError):
        subdiff.dfamily({"gradients": [[i, 1] for i in range(21)]})


def test_svg_rendering():
    result = subdiff.outer(FIXTURES / "disks.json")
    svg = subdiff.render_svg(result)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert json.loads(json.dumps(result)) == result
