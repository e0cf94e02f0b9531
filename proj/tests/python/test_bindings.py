import pytest

sg = pytest.importorskip("sparsegf2")


def test_thresholds_fixed_weight():
    assert abs(sg.alpha_star("r=3") - 0.889493) <= 5e-6
    assert abs(sg.alpha_sharp("r=3") - 0.818469) <= 5e-6
    assert abs(sg.alpha_bar("r=3") - 0.917935) <= 5e-6
    assert sg.alpha_bar("r=2") is None
    assert sg.g_star("r=3", 0.5) == 0.0


def test_report_dict():
    rep = sg.thresholds("0.9:3,0.1:24")
    assert rep["sign_pattern"]
    assert len(rep["discontinuities"]) == 2


def test_linear_algebra_and_core():
    triangle = [[0, 1], [1, 2], [0, 2]]
    assert sg.corank(triangle, 3) == 1
    assert sorted(sg.null_vectors(triangle, 3)) == [0, 7]
    core = sg.peel(triangle + [[2, 3]], 4)
    assert core["core_rows"] == 3


def test_sampling_is_seeded():
    a = sg.sample_rows(50, 40, "r=3", "exact", 3)
    assert a == sg.sample_rows(50, 40, "r=3", "exact", 3)
    assert a != sg.sample_rows(50, 40, "r=3", "exact", 4)
    assert all(len(r) == 3 for r in a)
    assert 1 <= sg.first_dependency(100, "r=3", "exact", 1) <= 101


def test_exact_values():
    assert sg.pi_multinomial_exact(2, 2, "r=1") == "1/2"
    assert abs(sg.expected_null_count(3, 2, "r=2") - 4 / 3) <= 1e-12


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        sg.alpha_star("0.5:3,0.6:4")
    with pytest.raises(ValueError):
        sg.verify("nosuch")
