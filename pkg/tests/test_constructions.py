import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from flasquekit.algebra.classify import is_coflasque, is_flasque  # noqa: E402
from flasquekit.algebra.cohomology import order_of  # noqa: E402
from flasquekit.algebra.groups import abelian_group, cyclic_group, trivial_subgroup  # noqa: E402
from flasquekit.algebra.lattice import LatticeMap, augmentation, kernel, trivial_lattice  # noqa: E402
from flasquekit.constructions.builders import (  # noqa: E402
    build_esempio,
    build_flasque_with_z,
    build_lemma_esatta,
    build_prop_piatto,
    lemma_esatta_preset,
    standard_isomorphism,
    verify_splitting_exceeds_p,
)
from flasquekit.constructions.report import ConstructionReport  # noqa: E402
from flasquekit.algebra.groups import subgroup_generated  # noqa: E402
from flasquekit.execution.pool import SweepPool  # noqa: E402
from flasquekit.utils.errors import InvalidInputError  # noqa: E402


def test_report_serialization_hides_timings_by_default():
    report = ConstructionReport("demo", {"p": 2})
    with report.timed("stage"):
        report.check("always", True)
    assert report.passed
    assert "timings" not in report.to_dict()
    assert "stage" in report.to_dict(include_timings=True)["timings"]
    report.check("never", False, "detail")
    assert not report.passed


def test_esempio_p2():
    result = build_esempio(2)
    report = result.report
    assert report.passed, [c for c in report.checks if not c.passed]
    assert result.f_tilde.rank == 5
    assert report.ranks == {"Z[L]^2": 8, "F_tilde": 5}
    assert report.invariant_factors == {"H1(L, F_tilde)": [2], "H3(L, Z)": [2]}
    assert len(report.data["generator_restrictions"]) == 3
    assert is_flasque(result.f_tilde).holds
    assert not is_coflasque(result.f_tilde).holds


def test_esempio_is_deterministic_across_threads():
    serial = build_esempio(2).report.to_dict()
    with SweepPool(4) as pool:
        threaded = build_esempio(2, pool).report.to_dict()
    assert serial == threaded


def test_esempio_p3():
    result = build_esempio(3)
    assert result.report.passed
    assert result.f_tilde.rank == 10
    assert result.report.invariant_factors["H1(L, F_tilde)"] == [3]


def test_esempio_rejects_non_prime():
    with pytest.raises(InvalidInputError):
        build_esempio(4)


@pytest.mark.parametrize("preset,rank", [("norm", 9), ("p-mult", 6)])
def test_lemma_esatta_presets(preset, rank):
    group, q, psi = lemma_esatta_preset(preset)
    result = build_lemma_esatta(group, q, psi)
    assert result.report.passed
    assert result.n.rank == rank
    assert result.report.ranks["N"] == rank
    assert np.array_equal(result.projection.matrix.astype(object).dot(result.source_map.matrix.astype(object)), np.zeros((rank, 1), dtype=object))


def test_lemma_esatta_rejects_cyclic_group():
    group = cyclic_group(4)
    z = trivial_lattice(group)
    with pytest.raises(InvalidInputError, match="non-cyclic"):
        build_lemma_esatta(group, z, LatticeMap(z, z, np.eye(1, dtype=np.int64)))


def test_lemma_esatta_rejects_non_coflasque_q():
    group = abelian_group([2, 2])
    ideal, _ = kernel(augmentation(group, trivial_subgroup(group)))
    zero = LatticeMap(trivial_lattice(group), ideal, np.zeros((ideal.rank, 1), dtype=np.int64))
    with pytest.raises(InvalidInputError, match="not coflasque"):
        build_lemma_esatta(group, ideal, zero)


def test_unknown_preset():
    with pytest.raises(InvalidInputError):
        lemma_esatta_preset("bogus")


@pytest.mark.parametrize("p", [2, 3])
def test_prop_piatto(p):
    result = build_prop_piatto(p)
    report = result.report
    assert report.passed, [c for c in report.checks if not c.passed]
    assert result.f_hat.rank == p * (p + 1)
    names = [c.name for c in report.checks]
    assert names[:3] == ["(a) F_hat_0 is coflasque", "(b) F_hat is flasque", "(c) rank is p(p+1)"]
    assert "H1(G, F_hat)" in report.invariant_factors


def test_prop_piatto_bounds():
    with pytest.raises(InvalidInputError):
        build_prop_piatto(7)
    with pytest.raises(InvalidInputError):
        build_prop_piatto(4)


def test_standard_isomorphism_is_a_bijection():
    gamma = abelian_group([2, 2, 2])
    standard = abelian_group([2, 2])
    subgroup = subgroup_generated(gamma, [3, 5])
    iso = standard_isomorphism(subgroup, standard)
    assert sorted(iso) == [0, 1, 2, 3]
    local = subgroup.as_group
    for a in range(4):
        for b in range(4):
            assert iso[local.mul[a][b]] == standard.mul[iso[a]][iso[b]]


def test_flasque_z_guards():
    with pytest.raises(InvalidInputError, match="stretch"):
        build_flasque_with_z(3)
    with pytest.raises(InvalidInputError, match="stretch_max_order"):
        build_flasque_with_z(5, stretch=True)


@pytest.mark.slow
def test_flasque_z_p2():
    result = build_flasque_with_z(2)
    report = result.report
    assert report.passed, [c for c in report.checks if not c.passed]
    assert len(result.maximal) == 7
    assert report.ranks["summands"] == 7
    assert result.f_hat.lattice.rank == 70
    assert order_of(result.z) == 2
    assert all(order_of(c) == 2 for c in result.component_classes)


@pytest.mark.slow
def test_splitting_index_exceeds_p():
    report = verify_splitting_exceeds_p(2)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert report.data["splitting_index"]["min_index"] >= 4
    assert report.data["zero_class_control"] == {"min_index": 1}
