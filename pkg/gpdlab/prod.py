"""
Direct and semidirect products of finite groupoids.

Product elements are packed tuples, e.g. the pair (x, g) is stored as "(x|g)".
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from .config import get_settings
from .core import (
    GroupoidFunctor,
    GroupoidTable,
    ValidationReport,
    iter_isomorphisms,
    is_connected,
    isotropy_group,
    pack,
    pair_groupoid,
    require_groupoid,
    require_isomorphism,
    restrict,
    verify_functor,
)
from .errors import AxiomError, EmbeddingError, FormatError
from .subgrp import conjugate_set, is_normal, is_subgroup, product_set


def direct_product(factors: Sequence[GroupoidTable], name: Optional[str] = None) -> GroupoidTable:
    """
    Direct product of a finite family: componentwise composition, defined
    exactly when every component is composable.

    Args:
        factors: Non-empty list of valid groupoids
        name: Name of the product table

    Returns:
        GroupoidTable: Elements (x1|...|xn) in lexicographic order

    Raises:
        FormatError: If the family is empty
    """
    if not factors:
        raise FormatError("direct product of an empty family")

    elements = [pack(*parts) for parts in product(*(t.elements for t in factors))]
    objects = {pack(*parts) for parts in product(*(t.object_list for t in factors))}
    dmap, rmap, inv = {}, {}, {}
    for parts in product(*(t.elements for t in factors)):
        key = pack(*parts)
        dmap[key] = pack(*(t.d(g) for t, g in zip(factors, parts)))
        rmap[key] = pack(*(t.r(g) for t, g in zip(factors, parts)))
        inv[key] = pack(*(t.inverse(g) for t, g in zip(factors, parts)))

    comp = {}
    for entries in product(*(list(t.comp.items()) for t in factors)):
        outer = pack(*(g for (g, _), _ in entries))
        inner = pack(*(h for (_, h), _ in entries))
        comp[(outer, inner)] = pack(*(k for _, k in entries))

    logger.debug(f"Direct product of {len(factors)} factors: {len(elements)} elements")
    return GroupoidTable(
        name or "x".join(t.name for t in factors),
        tuple(elements),
        frozenset(objects),
        dmap, rmap, inv, comp,
    )


def associator(a: GroupoidTable, b: GroupoidTable,
               c: GroupoidTable) -> Tuple[GroupoidFunctor, GroupoidFunctor]:
    """
    Tuple-flattening isomorphisms (A×B)×C → A×B×C and A×(B×C) → A×B×C.

    Raises:
        NotFunctorialError: If either flattening is not an isomorphism
    """
    flat = direct_product([a, b, c])
    left = direct_product([direct_product([a, b]), c])
    right = direct_product([a, direct_product([b, c])])
    left_map, right_map = {}, {}
    for x, y, z in product(a.elements, b.elements, c.elements):
        left_map[pack(pack(x, y), z)] = pack(x, y, z)
        right_map[pack(x, pack(y, z))] = pack(x, y, z)
    F = GroupoidFunctor(left, flat, left_map, name="flatten_left")
    G = GroupoidFunctor(right, flat, right_map, name="flatten_right")
    require_isomorphism(F)
    require_isomorphism(G)
    return F, G


# Actions of groups by automorphisms -----------------------------------------


@dataclass(frozen=True)
class AutAction:
    """
    A group acting on a groupoid by automorphisms.

    ``omega`` stores one full element permutation of ``target`` per group element.
    """

    group: GroupoidTable
    target: GroupoidTable
    omega: Mapping[str, Mapping[str, str]] = field(hash=False)
    name: str = "omega"

    def __call__(self, g: str, x: str) -> str:
        return self.omega[g][x]

    @property
    def unit(self) -> str:
        return self.group.object_list[0]


def validate_autaction(act: AutAction) -> ValidationReport:
    """
    Check that omega is a homomorphism from the group into Aut(target).

    Tags: group, total, automorphism, objects, unit, homomorphism.
    """
    group, target = act.group, act.target
    report = ValidationReport(subject=f"autaction {act.name} of {group.name} on {target.name}")

    if len(group.objects) != 1:
        report.add("group", tuple(group.object_list), f"{group.name} has {len(group.objects)} objects")
        return report

    for g in group.elements:
        perm = act.omega.get(g)
        if perm is None:
            report.add("total", (g,), f"no permutation for {g}")
            continue
        missing = [x for x in target.elements if x not in perm]
        if missing or any(v not in target for v in perm.values()):
            report.add("total", (g,), f"permutation for {g} is not a map on {target.name}")
    if not report.passed:
        return report

    for g in group.elements:
        perm = act.omega[g]
        F = GroupoidFunctor(target, target, perm, name=f"{act.name}_{g}")
        functor_report = verify_functor(F)
        if not functor_report.passed or len(F.image) != len(target):
            report.add("automorphism", (g,), f"{act.name}_{g} is not an automorphism of {target.name}")
        if {perm[e] for e in target.objects} != set(target.objects):
            report.add("objects", (g,), f"{act.name}_{g} does not preserve the object set")

    unit = act.unit
    moved = [x for x in target.elements if act(unit, x) != x]
    if moved:
        report.add("unit", (unit, moved[0]), f"{act.name}_1 moves {moved[0]}")

    for g, h in group.composable_pairs:
        gh = group.compose(g, h)
        if gh is None:
            continue
        for x in target.elements:
            if act(gh, x) != act(g, act(h, x)):
                report.add("homomorphism", (g, h, x),
                           f"{act.name}_{gh}({x}) != {act.name}_{g}({act.name}_{h}({x}))")
                break
    return report


def trivial_action(group: GroupoidTable, target: GroupoidTable) -> AutAction:
    """The action by identity automorphisms."""
    identity = {x: x for x in target.elements}
    return AutAction(group, target, {g: identity for g in group.elements}, name="trivial")


def automorphisms(t: GroupoidTable, fix_objects: bool = False) -> List[Dict[str, str]]:
    """
    Automorphisms of a table, at most automorphism_limit of them.

    Args:
        t: Valid groupoid
        fix_objects: Keep only automorphisms fixing every object

    Returns:
        list: Element permutations; the identity comes first
    """
    limit = get_settings().automorphism_limit
    found: List[Dict[str, str]] = []
    for mapping in iter_isomorphisms(t, t):
        if fix_objects and any(mapping[e] != e for e in t.objects):
            continue
        found.append(mapping)
        if len(found) >= limit:
            logger.warning(f"{t.name}: automorphism enumeration stopped at {limit}")
            break
    found.sort(key=lambda m: [t.index[m[g]] for g in t.elements])
    return found


def isotropy_conjugation_action(t: GroupoidTable, e: str) -> Tuple[GroupoidTable, AutAction]:
    """
    For connected t, the product pair(G₀) × G_e together with G_e acting on
    its second factor by conjugation: a·((x|y)|g) = ((x|y)|a g a⁻¹).

    Returns:
        tuple: (pair(G₀) × G_e, conjugation AutAction of G_e)

    Raises:
        AxiomError: If t is not connected
    """
    if not is_connected(t):
        raise AxiomError(f"{t.name} is not connected")
    group = restrict(t, isotropy_group(t, e), name=f"{t.name}_{e}")
    pair = pair_groupoid(t.object_list, name=f"pair({t.name}0)")
    target = direct_product([pair, group])

    omega: Dict[str, Dict[str, str]] = {}
    for a in group.elements:
        a_inv = group.inverse(a)
        perm = {}
        for p in pair.elements:
            for g in group.elements:
                conj = group.compose(group.compose(a, g), a_inv)
                perm[pack(p, g)] = pack(p, conj)
        omega[a] = perm
    return target, AutAction(group, target, omega, name="conj")


# Semidirect products ----------------------------------------------------------


def semidirect_product(t: GroupoidTable, act: AutAction, name: Optional[str] = None) -> GroupoidTable:
    """
    The semidirect product G ×_ω Γ.

    (x,g)(z,h) is defined iff d(x) = r(ω_g(z)) and equals (x ω_g(z), gh);
    d(x,a) = (ω_{a⁻¹}(d(x)), 1), r(x,a) = (r(x), 1) and
    (x,a)⁻¹ = (ω_{a⁻¹}(x⁻¹), a⁻¹).

    Raises:
        AxiomError: If the action is invalid
    """
    validate_autaction(act).raise_if_failed(AxiomError)
    if act.target.elements != t.elements:
        raise FormatError(f"action {act.name} acts on {act.target.name}, not {t.name}")

    group = act.group
    unit = act.unit
    elements = [pack(x, g) for x in t.elements for g in group.elements]
    objects = {pack(e, unit) for e in t.object_list}
    dmap, rmap, inv = {}, {}, {}
    for x in t.elements:
        for a in group.elements:
            a_inv = group.inverse(a)
            key = pack(x, a)
            dmap[key] = pack(act(a_inv, t.d(x)), unit)
            rmap[key] = pack(t.r(x), unit)
            inv[key] = pack(act(a_inv, t.inverse(x)), a_inv)

    comp = {}
    for x in t.elements:
        for g in group.elements:
            for z in t.elements:
                twisted = act(g, z)
                if t.d(x) != t.r(twisted):
                    continue
                xz = t.compose(x, twisted)
                if xz is None:
                    raise AxiomError(f"{t.name}: {x}∘{twisted} undefined; validate the table")
                for h in group.elements:
                    comp[(pack(x, g), pack(z, h))] = pack(xz, group.compose(g, h))

    result = GroupoidTable(
        name or f"{t.name}x_{act.name}{group.name}",
        tuple(elements), frozenset(objects), dmap, rmap, inv, comp,
    )
    logger.debug(f"Semidirect product {result.name}: {len(result)} elements")
    return result


def identity_is_homomorphism(t: GroupoidTable, act: AutAction,
                             report: Optional[ValidationReport] = None) -> bool:
    """
    Whether the identity map G×Γ → G×_ω Γ preserves every product.
    """
    direct = direct_product([t, act.group])
    twisted = semidirect_product(t, act)
    ok = True
    for (g, h), k in direct.comp.items():
        if twisted.compose(g, h) != k:
            ok = False
            if report is not None:
                report.add("identity-homomorphism", (g, h),
                           f"{g}{h} = {k} in the direct product but {twisted.compose(g, h)} when twisted")
            else:
                break
    return ok


def omega_is_trivial(act: AutAction, report: Optional[ValidationReport] = None) -> bool:
    """Whether every ω_g is the identity."""
    ok = True
    for g in act.group.elements:
        moved = [x for x in act.target.elements if act(g, x) != x]
        if moved:
            ok = False
            if report is not None:
                report.add("omega-trivial", (g, moved[0]), f"{act.name}_{g}({moved[0]}) = {act(g, moved[0])}")
    return ok


def objects_times_group(t: GroupoidTable, act: AutAction) -> FrozenSet[str]:
    return frozenset(pack(e, g) for e in t.object_list for g in act.group.elements)


def objects_times_group_is_normal(t: GroupoidTable, act: AutAction,
                                  report: Optional[ValidationReport] = None) -> bool:
    """Whether G₀ × Γ is a normal subgroupoid of G ×_ω Γ."""
    twisted = semidirect_product(t, act)
    ok = is_normal(twisted, objects_times_group(t, act))
    if not ok and report is not None:
        report.add("objects-normal", (f"{t.name}0 x {act.group.name}",),
                   f"G0 x {act.group.name} is not normal in {twisted.name}")
    return ok


class TrichotomyReport(BaseModel):
    """Three conditions that coincide for actions fixing every object."""

    identity_homomorphism: bool
    omega_trivial: bool
    objects_group_normal: bool
    objects_fixed: bool = Field(description="Every ω_g fixes every object")
    report: ValidationReport = Field(default_factory=ValidationReport)

    @property
    def agree(self) -> bool:
        return self.identity_homomorphism == self.omega_trivial == self.objects_group_normal


def semidirect_trichotomy(t: GroupoidTable, act: AutAction) -> TrichotomyReport:
    """
    Evaluate all three conditions without short-circuiting.

    The three coincide whenever ω fixes the objects pointwise. An action moving
    objects with no fixed object (such as the swap on a pair groupoid) makes
    G₀ × Γ normal while ω is not trivial; ``objects_fixed`` flags those inputs.
    """
    report = ValidationReport(subject=f"trichotomy for {t.name} and {act.name}")
    result = TrichotomyReport(
        identity_homomorphism=identity_is_homomorphism(t, act, report),
        omega_trivial=omega_is_trivial(act, report),
        objects_group_normal=objects_times_group_is_normal(t, act, report),
        objects_fixed=all(act(g, e) == e for g in act.group.elements for e in t.objects),
        report=report,
    )
    if not result.agree:
        level = "WARNING" if not result.objects_fixed else "ERROR"
        logger.log(level, f"Trichotomy conditions disagree for {t.name}, {act.name}: "
                          f"{result.identity_homomorphism}, {result.omega_trivial}, "
                          f"{result.objects_group_normal}")
    return result


def recognize_internal_semidirect(parent: GroupoidTable, h: Iterable[str],
                                  sub: Iterable[str]) -> GroupoidFunctor:
    """
    Recognize HG inside a groupoid as the semidirect product H ×_ω G.

    G acts on H by conjugation ω_g(k) = g k g⁻¹; every element of H must lie in
    the isotropy group G_e containing G, otherwise conjugation is undefined.
    In a one-object parent H is checked with is_normal. In a parent with more
    objects H cannot be wide, and it must be normal in G_e, the only elements
    that compose with H on both sides.

    Args:
        parent: Valid groupoid
        h: Normal subgroupoid H, or a subgroup normal in G_e
        sub: Subgroup G with H ∩ G = {1_G}

    Returns:
        GroupoidFunctor: Verified isomorphism HG → H ×_ω G, kg ↦ (k, g)

    Raises:
        EmbeddingError: If a precondition fails or the factorization is not unique
    """
    members = frozenset(h)
    group_members = frozenset(sub)
    parent.require(members | group_members)
    require_groupoid(parent)

    def fail(message: str, witnesses: Sequence[str] = ()) -> None:
        logger.error(f"{parent.name}: {message}")
        raise EmbeddingError(f"{parent.name}: {message}", witnesses=witnesses)

    if not is_subgroup(parent, group_members):
        fail("G is not a subgroup")
    unit = parent.d(next(iter(group_members)))
    common = members & group_members
    if common != {unit}:
        fail("H ∩ G is larger than the identity", parent.sort(common - {unit}))
    outside = [k for k in parent.sort(members) if parent.d(k) != unit or parent.r(k) != unit]
    if outside:
        fail(f"G cannot conjugate {outside[0]}: H is not inside the isotropy group at {unit}", outside)
    if parent.objects <= members:
        if not is_normal(parent, members):
            fail("H is not a normal subgroupoid")
    else:
        if not is_subgroup(parent, members):
            fail("H is not a subgroup")
        # only elements of the isotropy group at the unit compose with H on both sides
        for g in parent.sort(isotropy_group(parent, unit)):
            leaked = conjugate_set(parent, members, g) - members
            if leaked:
                fail(f"H is not normal: conjugating by {g} gives {parent.sort(leaked)[0]}", (g,))

    h_table = restrict(parent, members, name=f"{parent.name}_H")
    group = restrict(parent, group_members, name=f"{parent.name}_G")
    omega: Dict[str, Dict[str, str]] = {}
    for g in group.elements:
        g_inv = parent.inverse(g)
        perm = {}
        for k in h_table.elements:
            conj = parent.compose(parent.compose(g, k), g_inv)
            if conj not in members:
                fail(f"conjugating {k} by {g} leaves H", (g, k))
            perm[k] = conj
        omega[g] = perm
    act = AutAction(group, h_table, omega, name="conj")
    validate_autaction(act).raise_if_failed(EmbeddingError)

    twisted = semidirect_product(h_table, act)
    hg = product_set(parent, [members, group_members])
    mapping: Dict[str, str] = {}
    for k in h_table.elements:
        for g in group.elements:
            p = parent.compose(k, g)
            if p in mapping:
                fail(f"{p} factors in more than one way", (p,))
            mapping[p] = pack(k, g)

    source = restrict(parent, hg, name=f"{parent.name}_HG")
    F = GroupoidFunctor(source, twisted, mapping, name="phi")
    verify_functor(F).raise_if_failed(EmbeddingError)
    if len(F.image) != len(twisted):
        fail("HG is not in bijection with H x G")
    logger.success(f"Recognized {source.name} as {twisted.name} ({len(source)} elements)")
    return F
