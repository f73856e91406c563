"""Builders for the explicit lattices and classes, each with a verification report."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sympy import isprime

from flasquekit.algebra.classify import Verdict, is_coflasque, is_flasque
from flasquekit.algebra.cohomology import (
    CohomologyClass,
    class_of,
    cohomology,
    component_cocycle,
    direct_sum_cocycle,
    element_of_order,
    enumerate_classes,
    order_of,
    restriction,
    splitting_index,
)
from flasquekit.algebra.groups import (
    FiniteGroup,
    Subgroup,
    abelian_group,
    homomorphism_from_images,
    independent_pair,
    invert_bijection,
    is_cyclic,
    maximal_subgroups,
    trivial_subgroup,
    whole_group,
)
from flasquekit.algebra.lattice import (
    DirectSum,
    GammaLattice,
    LatticeMap,
    augmentation,
    cokernel_torsion_free,
    coinduce,
    diagonal_map,
    direct_sum,
    dual,
    esempio_phi,
    image_basis,
    kernel,
    norm_map,
    regular_lattice,
    restrict,
    scalar_map,
    stack_maps,
    transport,
    trivial_lattice,
)
from flasquekit.config.settings import FlasqueKitConfig
from flasquekit.constructions.report import ConstructionReport
from flasquekit.execution.pool import SweepPool
from flasquekit.utils.errors import ConstructionError, InvalidInputError
from flasquekit.utils.logger import Logger


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not isprime(p):
        raise InvalidInputError(f"p must be a prime, got {p!r}")


def _log(logger: Optional[Logger], message: str, level: str = "INFO") -> None:
    if logger is not None:
        logger.log_print(message, level=level, module="builders")


def _log_timings(logger: Optional[Logger], report: ConstructionReport) -> None:
    if logger is not None:
        for stage, seconds in report.timings.items():
            logger.log_metric(f"{report.construction} {stage}", f"{seconds:.3f}", "s", module="builders")


def _verdict_summary(verdict: Verdict) -> dict:
    return verdict.to_dict()


@dataclass(frozen=True, eq=False)
class EsempioResult:
    group: FiniteGroup
    f_tilde: GammaLattice
    f_tilde_zero: GammaLattice
    phi: LatticeMap
    report: ConstructionReport


def build_esempio(p: int, pool: SweepPool | None = None, logger: Optional[Logger] = None) -> EsempioResult:
    """F̃ = (ker φ)° over Λ = (ℤ/p)², with φ: ℤ[Λ]² → ℤ[Λ] from the two generators."""
    _require_prime(p)
    report = ConstructionReport("esempio", {"p": p})
    group = abelian_group([p, p])
    with report.timed("build"):
        phi = esempio_phi(group)
        eps = augmentation(group, trivial_subgroup(group))
        f_zero, _ = kernel(phi)
        f_tilde = dual(f_zero)
    _log(logger, f"ker(φ) has rank {f_zero.rank}")
    report.ranks.update({"Z[L]^2": phi.source.rank, "F_tilde": f_tilde.rank})

    with report.timed("exactness"):
        _, eps_kernel = kernel(eps)
        image_rows = image_basis(phi)
        kernel_rows = image_basis(eps_kernel)
    report.check(
        "image(phi) = kernel(epsilon)",
        image_rows.shape == kernel_rows.shape and np.array_equal(image_rows, kernel_rows),
        f"Hermite bases of rank {image_rows.shape[0]} and {kernel_rows.shape[0]}",
    )

    with report.timed("flasque"):
        verdict = is_flasque(f_tilde, pool)
    report.verdicts["F_tilde"] = {"flasque": _verdict_summary(verdict)}
    report.check("F_tilde is flasque", verdict.holds, f"{verdict.checked} subgroups checked")

    with report.timed("cohomology"):
        h1 = cohomology(group, f_tilde, 1)
        h3 = cohomology(group, trivial_lattice(group), 3)
    report.invariant_factors["H1(L, F_tilde)"] = list(h1.invariant_factors)
    report.invariant_factors["H3(L, Z)"] = list(h3.invariant_factors)
    report.check("H1(L, F_tilde) = Z/p", h1.invariant_factors == (p,), str(list(h1.invariant_factors)))
    report.check("H3(L, Z) = Z/p", h3.invariant_factors == (p,), str(list(h3.invariant_factors)))

    # Recorded, not asserted: where the generator of H¹(Λ, F̃) survives.
    if h1.generators:
        generator = class_of(group, f_tilde, 1, h1.generators[0])
        report.data["generator_restrictions"] = [
            {"subgroup": list(h.elements), "zero": restriction(generator, h).is_zero}
            for h in maximal_subgroups(group)
        ]
    _log(logger, f"esempio p={p}: {'passed' if report.passed else 'FAILED'}", "SUCCESS" if report.passed else "ERROR")
    _log_timings(logger, report)
    return EsempioResult(group, f_tilde, f_zero, phi, report)


def standard_isomorphism(subgroup: Subgroup, standard: FiniteGroup) -> tuple[int, ...]:
    """Map ``subgroup.as_group`` → ``standard`` sending the first independent pair to the generators."""
    local = subgroup.as_group
    first, second = independent_pair(local)
    forward = homomorphism_from_images(standard, local, (first, second))
    return invert_bijection(forward)


@dataclass(frozen=True, eq=False)
class FlasqueZResult:
    group: FiniteGroup
    f_hat: DirectSum
    z: CohomologyClass
    component_classes: tuple[CohomologyClass, ...]
    maximal: tuple[Subgroup, ...]
    report: ConstructionReport


def build_flasque_with_z(
    p: int,
    stretch: bool = False,
    pool: SweepPool | None = None,
    logger: Optional[Logger] = None,
) -> FlasqueZResult:
    """F̂ = ⊕ᵢ CoInd_{Λᵢ}^Γ F̃ over Γ = (ℤ/p)³, and z = (zᵢ) with every zᵢ of order p."""
    _require_prime(p)
    if p != 2 and not stretch:
        raise InvalidInputError(f"p={p} is a stretch run; pass stretch=True (--stretch) to allow it")
    if p**3 > FlasqueKitConfig.current().stretch_max_order:
        raise InvalidInputError(f"p={p} gives a group of order {p**3}, over stretch_max_order")
    report = ConstructionReport("flasque-z", {"p": p})
    gamma = abelian_group([p, p, p])
    esempio = build_esempio(p, pool, logger)
    f_tilde = esempio.f_tilde
    standard = esempio.group
    report.check("F_tilde passes its own checks", esempio.report.passed, f"rank {f_tilde.rank}")

    maximal = tuple(maximal_subgroups(gamma))
    cyclic = [h.elements for h in maximal if is_cyclic(h)]
    if cyclic:
        raise ConstructionError("a maximal subgroup is cyclic", details={"subgroups": [list(c) for c in cyclic]})
    report.data["maximal_subgroups"] = [list(h.elements) for h in maximal]

    summands: list[GammaLattice] = []
    components: list[CohomologyClass] = []
    with report.timed("summands"):
        for i, subgroup in enumerate(maximal):
            local = subgroup.as_group
            transported = _relabel(
                transport(f_tilde, local, standard_isomorphism(subgroup, standard)),
                f"F_tilde_{i}",
            )
            summand = coinduce(subgroup, transported, gamma)
            h1 = cohomology(gamma, summand, 1)
            try:
                zi = element_of_order(h1, p)
            except LookupError as exc:
                raise ConstructionError(f"H1 of summand {i} has no element of order {p}") from exc
            summands.append(summand)
            components.append(zi)
            _log(logger, f"summand {i}: rank {summand.rank}, H1 = {list(h1.invariant_factors)}")
    f_hat = direct_sum(summands, label="F_hat")
    report.ranks["F_hat"] = f_hat.lattice.rank
    report.ranks["summands"] = len(summands)

    cocycle = direct_sum_cocycle(f_hat, 1, [c.representative for c in components])
    z = class_of(gamma, f_hat.lattice, 1, cocycle)
    report.invariant_factors["H1(G, F_hat)"] = list(z.parent.invariant_factors)

    with report.timed("flasque"):
        verdict = is_flasque(f_hat.lattice, pool)
    report.verdicts["F_hat"] = {"flasque": _verdict_summary(verdict)}
    report.check("(a) F_hat is flasque", verdict.holds, f"{verdict.checked} subgroups checked")

    summand_verdicts = [is_flasque(s, pool).holds for s in summands]
    report.verdicts["summands_flasque"] = summand_verdicts
    report.check(
        "flasque(F_hat) agrees with all summands flasque",
        verdict.holds == all(summand_verdicts),
        str(summand_verdicts),
    )

    report.check("(b) order of z is p", order_of(z) == p, f"order {order_of(z)}")

    restrictions = []
    component_survival = []
    with report.timed("restrictions"):
        for i, subgroup in enumerate(maximal):
            restricted = restriction(z, subgroup)
            restrictions.append(not restricted.is_zero)
            local_sum = direct_sum([restrict(s, subgroup) for s in summands])
            nonzero_components = []
            for j in range(len(summands)):
                part = component_cocycle(local_sum, j, restricted.representative)
                nonzero_components.append(
                    not class_of(local_sum.lattice.group, local_sum.summands[j], 1, part).is_zero
                )
            component_survival.append(nonzero_components[i])
            report.data.setdefault("restriction_components", []).append(
                {"subgroup": list(subgroup.elements), "nonzero_components": [j for j, nz in enumerate(nonzero_components) if nz]}
            )
    report.check("(c) restriction of z to every maximal subgroup is nonzero", all(restrictions), str(restrictions))
    report.check("own component of every restriction is nonzero", all(component_survival), str(component_survival))

    injective = []
    with report.timed("injectivity"):
        for subgroup, summand in zip(maximal, summands):
            h1 = cohomology(gamma, summand, 1)
            injective.append(
                all(
                    not restriction(cls, subgroup).is_zero
                    for cls in enumerate_classes(h1)
                    if not cls.is_zero
                )
            )
    report.check("(d) restriction H1(G, F_hat_i) -> H1(L_i, F_hat_i) is injective", all(injective), str(injective))
    _log(logger, f"flasque-z p={p}: {'passed' if report.passed else 'FAILED'}", "SUCCESS" if report.passed else "ERROR")
    _log_timings(logger, report)
    return FlasqueZResult(gamma, f_hat, z, tuple(components), maximal, report)


def _relabel(lattice: GammaLattice, label: str) -> GammaLattice:
    return GammaLattice(lattice.group, lattice.rank, lattice.action, label, False)


@dataclass(frozen=True, eq=False)
class LemmaEsattaResult:
    n: GammaLattice
    projection: LatticeMap
    source_map: LatticeMap
    report: ConstructionReport


def build_lemma_esatta(
    group: FiniteGroup,
    q: GammaLattice,
    psi: LatticeMap,
    pool: SweepPool | None = None,
    logger: Optional[Logger] = None,
    name: str = "esatta",
    check_label: str = "N is coflasque",
) -> LemmaEsattaResult:
    """N = coker(ℤ →(Δ, ψ) ⊕_{Λ maximal} ℤ[Γ/Λ] ⊕ Q), checked coflasque."""
    if is_cyclic(whole_group(group)):
        raise InvalidInputError("the group must be non-cyclic")
    if q.group != group:
        raise InvalidInputError("Q must be a lattice over the group")
    if psi.source.rank != 1 or any(not np.array_equal(m, np.eye(1, dtype=np.int64)) for m in psi.source.action):
        raise InvalidInputError("psi must start at the trivial lattice Z")
    if not psi.target.same_action(q):
        raise InvalidInputError("psi must land in Q")
    report = ConstructionReport(name, {"group": group.label, "Q": q.label})
    q_verdict = is_coflasque(q, pool)
    report.verdicts["Q"] = {"coflasque": _verdict_summary(q_verdict)}
    if not q_verdict.holds:
        raise InvalidInputError("Q is not coflasque", details={"witnesses": [w.to_dict() for w in q_verdict.witnesses]})

    family = maximal_subgroups(group)
    report.data["maximal_subgroups"] = [list(h.elements) for h in family]
    delta = diagonal_map(group, family)
    target = direct_sum([delta.target, q])
    source_map = stack_maps(trivial_lattice(group), target, [delta, psi])
    with report.timed("cokernel"):
        n, projection = cokernel_torsion_free(source_map)
    report.ranks.update({"source": 1, "middle": target.lattice.rank, "N": n.rank})
    with report.timed("coflasque"):
        verdict = is_coflasque(n, pool)
    report.verdicts["N"] = {"coflasque": _verdict_summary(verdict)}
    report.check(check_label, verdict.holds, f"{verdict.checked} subgroups checked")
    _log(logger, f"lemma esatta: N rank {n.rank}, coflasque={verdict.holds}")
    _log_timings(logger, report)
    return LemmaEsattaResult(n, projection, source_map, report)


def lemma_esatta_preset(preset: str) -> tuple[FiniteGroup, GammaLattice, LatticeMap]:
    """``norm``: Q = ℤ[Γ], ψ = norm. ``p-mult``: Q = ℤ, ψ = 2·. Both over (ℤ/2)²."""
    group = abelian_group([2, 2])
    if preset == "norm":
        return group, regular_lattice(group), norm_map(group)
    if preset == "p-mult":
        return group, trivial_lattice(group), scalar_map(group, 2)
    raise InvalidInputError(f"unknown preset {preset!r}; choose 'norm' or 'p-mult'")


@dataclass(frozen=True, eq=False)
class PiattoResult:
    group: FiniteGroup
    f_hat_zero: GammaLattice
    f_hat: GammaLattice
    report: ConstructionReport


def build_prop_piatto(p: int, pool: SweepPool | None = None, logger: Optional[Logger] = None) -> PiattoResult:
    """F̂⁰ = coker(ℤ →(Δ, p·) ⊕ᵢ ℤ[Γ/Λᵢ] ⊕ ℤ) over Γ = (ℤ/p)², and F̂ = (F̂⁰)°."""
    _require_prime(p)
    if p > 5:
        raise InvalidInputError(f"p must be at most 5, got {p}")
    group = abelian_group([p, p])
    result = build_lemma_esatta(
        group,
        trivial_lattice(group),
        scalar_map(group, p),
        pool,
        logger,
        name="piatto",
        check_label="(a) F_hat_0 is coflasque",
    )
    report = result.report
    report.parameters = {"p": p}
    f_hat_zero = result.n
    f_hat = dual(f_hat_zero)
    report.ranks["F_hat"] = f_hat.rank
    with report.timed("flasque"):
        verdict = is_flasque(f_hat, pool)
    report.verdicts["F_hat"] = {"flasque": _verdict_summary(verdict)}
    report.check("(b) F_hat is flasque", verdict.holds, f"{verdict.checked} subgroups checked")
    report.check("(c) rank is p(p+1)", f_hat.rank == p * (p + 1), f"rank {f_hat.rank}")
    report.invariant_factors["H1(G, F_hat)"] = list(cohomology(group, f_hat, 1).invariant_factors)
    _log(logger, f"piatto p={p}: {'passed' if report.passed else 'FAILED'}", "SUCCESS" if report.passed else "ERROR")
    _log_timings(logger, report)
    return PiattoResult(group, f_hat_zero, f_hat, report)


def verify_splitting_exceeds_p(
    p: int,
    flasque: FlasqueZResult | None = None,
    stretch: bool = False,
    pool: SweepPool | None = None,
    logger: Optional[Logger] = None,
) -> ConstructionReport:
    """No subgroup of index p kills z; the smallest vanishing index is at least p²."""
    if flasque is None:
        flasque = build_flasque_with_z(p, stretch, pool, logger)
    gamma, lattice, z = flasque.group, flasque.f_hat.lattice, flasque.z
    report = ConstructionReport("split-index", {"p": p})
    with report.timed("sweep"):
        index = splitting_index(gamma, lattice, z, pool)
    report.data["splitting_index"] = index.to_dict()
    report.check("min vanishing index >= p^2", index.min_index >= p * p, f"min index {index.min_index}")
    index_p = [h.elements for h in index.vanishing if gamma.order // h.order == p]
    report.check("no index-p subgroup kills z", not index_p, str([list(e) for e in index_p]))

    zero = z.scaled(0)
    control = splitting_index(gamma, lattice, zero, pool)
    report.data["zero_class_control"] = {"min_index": control.min_index}
    report.check("zero class control has min index 1", control.min_index == 1, f"min index {control.min_index}")

    consistent = all(restriction(z, h).is_zero for h in index.vanishing)
    report.check("z restricts to zero on every vanishing subgroup", consistent, f"{len(index.vanishing)} subgroups")
    _log(logger, f"split-index p={p}: min index {index.min_index}")
    _log_timings(logger, report)
    return report


__all__ = [
    "EsempioResult",
    "FlasqueZResult",
    "LemmaEsattaResult",
    "PiattoResult",
    "build_esempio",
    "build_flasque_with_z",
    "build_lemma_esatta",
    "build_prop_piatto",
    "lemma_esatta_preset",
    "standard_isomorphism",
    "verify_splitting_exceeds_p",
]
