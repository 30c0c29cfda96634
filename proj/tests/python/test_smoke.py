import json

import pytest

import expmatch as em


def test_census_matches_closed_form():
    assert em.census(em.complete(3)) == [1, 15, 45, 15]
    assert em.census(em.petersen())[-1] == 6


def test_spectrum_of_cocktail_party():
    s = em.spectrum(em.cocktail_party(6))
    assert s["sigma2"] == pytest.approx(0.2, abs=1e-8)
    assert s["degree"] == 10
    assert sum(s["eigenvalues"]) == pytest.approx(0.0, abs=1e-8)


def test_graph_roundtrip(tmp_path):
    g = em.random_regular(6, 3, seed=5)
    path = tmp_path / "g.txt"
    em.save_graph(g, str(path))
    h = em.load_graph(str(path))
    assert h == g
    assert h.fingerprint == g.fingerprint
    assert h.regular_degree == 3


def test_invalid_graph_raises():
    with pytest.raises(em.ValidationError):
        em.Graph(3, [(0, 1)])
    with pytest.raises(em.ValidationError):
        em.Graph(4, [(0, 0)])


def test_augmenting_path_on_complete_graph():
    g = em.complete(6)
    matching = [(0, 1), (2, 3)]
    path = em.find_augmenting_path(g, matching, eps=1 / 11, seed=3)
    assert path is not None
    assert em.is_augmenting_path(g, matching, path)
    assert len(path) - 1 <= em.rho_bound(1 / 11, 6, 2)["rho"]


def test_sample_is_perfect():
    g = em.petersen()
    m = em.sample_perfect_matching(g, eps=2 / 3, delta=0.1, seed=1)
    covered = sorted(v for e in m for v in e)
    assert covered == list(range(10))


def test_count_close_to_truth():
    r = em.count_perfect_matchings(em.complete(3), eps=0.2, delta=0.1, seed=7)
    assert r["estimate"] == pytest.approx(15, rel=0.1)
    assert len(r["per_level_ratios"]) == 2


def test_counterexample_has_no_perfect_matching():
    h = em.pendant_augment(em.complete(3))
    assert em.census(h)[-1] == 0


def test_greedy_bound():
    assert em.lower_bound_pm(6, 11, 1 / 11) == pytest.approx(0.0619, abs=5e-4)
    c = em.count_distinct_greedy(em.complete(6), 5, 1 / 11)
    assert c["distinct"] == c["num_sequences"] == 9450


def test_cli_in_process():
    code, out, _ = em.run_cli(["counterexample", "--family", "complete", "--n", "6"])
    assert code == 0
    report = json.loads(out)
    assert report["has_pm"] is False
    assert report["sigma2_bound_ok"] is True
    code, _, err = em.run_cli(["spectral", "--family", "nope", "--n", "3"])
    assert code == 1 and "unknown family" in err
