"""
Named fixtures and seeded random generators.

The named tables are the worked examples used throughout the tests and the
CLI fixture files. The generators draw small groupoids, partial actions,
actions by automorphisms and functors from a numpy Generator, so every sweep
is reproducible from ``settings.random_seed``.
"""

from itertools import permutations
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .catequiv import lift_action_morphism, projection_functor
from .config import get_settings
from .core import (
    GroupoidFunctor,
    GroupoidTable,
    connected_components,
    disjoint_union,
    isotropy_group,
    pack,
    pair_groupoid,
    rename,
    restrict,
)
from .errors import FormatError
from .pact import PartialActionTable, Point, restrict_action
from .prod import AutAction, automorphisms, direct_product, trivial_action
from .subgrp import generated_subgroupoid

Multiply = Callable[[str, str], str]


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Generator seeded from settings unless a seed is given."""
    return np.random.default_rng(get_settings().random_seed if seed is None else seed)


# Named groups -----------------------------------------------------------------


def group_table(name: str, ids: Sequence[str], multiply: Multiply) -> GroupoidTable:
    """
    One-object groupoid from a multiplication function; ids[0] is the unit.

    Args:
        name: Table name
        ids: Group element ids, unit first
        multiply: multiply(g, h) = g∘h

    Returns:
        GroupoidTable: The group as a groupoid with the single object ids[0]
    """
    unit = ids[0]
    comp = {(g, h): multiply(g, h) for g in ids for h in ids}
    inv = {g: next(h for h in ids if comp[(g, h)] == unit) for g in ids}
    return GroupoidTable(
        name, tuple(ids), frozenset({unit}),
        {g: unit for g in ids}, {g: unit for g in ids}, inv, comp,
    )


def _power_id(gen: str, k: int) -> str:
    if k == 0:
        return "1"
    return gen if k == 1 else f"{gen}^{k}"


def cyclic_group(n: int, gen: str = "r", name: Optional[str] = None) -> GroupoidTable:
    """Z_n with ids 1, r, r^2, ..."""
    ids = [_power_id(gen, k) for k in range(n)]
    exponent = {g: k for k, g in enumerate(ids)}
    return group_table(name or f"Z{n}", ids, lambda g, h: ids[(exponent[g] + exponent[h]) % n])


def z2() -> GroupoidTable:
    return cyclic_group(2, gen="a", name="Z2")


def klein_four() -> GroupoidTable:
    ids = ["1", "a", "b", "c"]
    bits = {g: i for i, g in enumerate(ids)}
    return group_table("V4", ids, lambda g, h: ids[bits[g] ^ bits[h]])


def symmetric_group_s3() -> GroupoidTable:
    """S3 on permutations written as image strings; 123 is the unit and g∘h(i) = g(h(i))."""
    ids = ["".join(p) for p in permutations("123")]
    ids.sort(key=lambda g: (g != "123", g))

    def multiply(g: str, h: str) -> str:
        return "".join(g[int(h[i]) - 1] for i in range(3))

    return group_table("S3", ids, multiply)


def alternating_subgroup_s3() -> frozenset:
    return frozenset({"123", "231", "312"})


def dihedral_group(n: int) -> GroupoidTable:
    """
    D_n of order 2n: rotations 1, r, ..., r^(n-1) and reflections s, sr, ...

    s^a r^i ∘ s^b r^j = s^(a+b) r^((-1)^b i + j).
    """
    rotations = [_power_id("r", k) for k in range(n)]
    reflections = ["s" if k == 0 else "s" + _power_id("r", k) for k in range(n)]
    ids = rotations + reflections
    decode = {g: (0, k) for k, g in enumerate(rotations)}
    decode.update({g: (1, k) for k, g in enumerate(reflections)})
    encode = {v: g for g, v in decode.items()}

    def multiply(g: str, h: str) -> str:
        (a, i), (b, j) = decode[g], decode[h]
        return encode[((a + b) % 2, ((-i if b else i) + j) % n)]

    return group_table(f"D{n}", ids, multiply)


# Named groupoids --------------------------------------------------------------

# (source, target, bit) model of pair({x,y}) x Z2 under the E8 names
_E8_MODEL = {
    "x": ("x", "x", 0), "y": ("y", "y", 0),
    "a": ("x", "x", 1), "u": ("x", "y", 0), "u-": ("y", "x", 0),
    "v": ("y", "x", 1), "v-": ("x", "y", 1), "b": ("y", "y", 1),
}
_E8_INVERSES = {"x": "x", "y": "y", "a": "a", "b": "b",
                "u": "u-", "u-": "u", "v": "v-", "v-": "v"}


def e8() -> GroupoidTable:
    """
    The closed eight-element example: objects x, y; a and b of order two at
    x and y; u, v⁻¹ : x → y with vu = a and uv = b.
    """
    ids = list(_E8_MODEL)
    encode = {model: g for g, model in _E8_MODEL.items()}
    comp = {}
    for g, (s1, t1, b1) in _E8_MODEL.items():
        for h, (s2, t2, b2) in _E8_MODEL.items():
            if s1 == t2:
                comp[(g, h)] = encode[(s2, t1, (b1 + b2) % 2)]
    return GroupoidTable(
        "E8", tuple(ids), frozenset({"x", "y"}),
        {g: m[0] for g, m in _E8_MODEL.items()},
        {g: m[1] for g, m in _E8_MODEL.items()},
        dict(_E8_INVERSES), comp,
    )


def e8_printed() -> GroupoidTable:
    """E8 without b and every product that involves it; (u, v) is left undefined."""
    full = e8()
    keep = tuple(g for g in full.elements if g != "b")
    return GroupoidTable(
        "E7", keep, full.objects,
        {g: full.d(g) for g in keep}, {g: full.r(g) for g in keep},
        {g: full.inverse(g) for g in keep},
        {(g, h): k for (g, h), k in full.comp.items() if "b" not in (g, h, k)},
    )


E8_H1 = frozenset({"u", "u-", "x", "y"})
E8_H2 = frozenset({"v", "v-", "x", "y"})


def pair_xy() -> GroupoidTable:
    return pair_groupoid(["x", "y"], name="pair_xy")


def pair_times_z2() -> GroupoidTable:
    return direct_product([pair_xy(), z2()], name="pair_xy_x_Z2")


def two_copies_z2() -> GroupoidTable:
    left = rename(z2(), lambda g: f"{g}.0", name="Z2.0")
    right = rename(z2(), lambda g: f"{g}.1", name="Z2.1")
    return disjoint_union([left, right], name="Z2+Z2")


def positive_fixtures() -> Dict[str, GroupoidTable]:
    """Tables that must pass every groupoid axiom."""
    tables = [z2(), pair_xy(), pair_times_z2(), e8(), symmetric_group_s3()]
    return {t.name: t for t in tables}


def small_groupoids() -> List[GroupoidTable]:
    """The sweep corpus of named groupoids with at most twelve elements."""
    return [
        z2(),
        cyclic_group(3),
        cyclic_group(4),
        klein_four(),
        symmetric_group_s3(),
        pair_groupoid(["x"], name="pair1"),
        pair_xy(),
        pair_groupoid(["x", "y", "z"], name="pair3"),
        two_copies_z2(),
        e8(),
        pair_times_z2(),
        dihedral_group(4),
    ]


def inclusion_functor(parent: GroupoidTable, members, name: str = "incl") -> GroupoidFunctor:
    """Inclusion of a subgroupoid, given by its members."""
    sub = restrict(parent, members, name=f"{parent.name}_sub")
    return GroupoidFunctor(sub, parent, {g: g for g in sub.elements}, name=name)


def internal_semidirect_cases() -> List[Tuple[GroupoidTable, frozenset, frozenset]]:
    """
    (parent, H, G) triples for recognizing internal semidirect products.

    Rotations in D_n with each reflection subgroup, Z_n x Z2 split along its
    factors, and the two-object cases of pair_semidirect_cases.
    """
    cases: List[Tuple[GroupoidTable, frozenset, frozenset]] = [
        (symmetric_group_s3(), alternating_subgroup_s3(), frozenset({"123", "213"})),
    ]
    for n in range(3, 7):
        dn = dihedral_group(n)
        rotations = frozenset(dn.elements[:n])
        for reflection in dn.elements[n:]:
            cases.append((dn, rotations, frozenset({"1", reflection})))
    for n in range(2, 6):
        parent = direct_product([cyclic_group(n), z2()], name=f"Z{n}xZ2")
        h = frozenset(g for g in parent.elements if g.endswith("|1)"))
        sub = frozenset(g for g in parent.elements if g.startswith("(1|"))
        cases.append((parent, h, sub))
    cases.extend(pair_semidirect_cases())
    return cases


def pair_semidirect_cases() -> List[Tuple[GroupoidTable, frozenset, frozenset]]:
    """
    Group splittings placed in the isotropy group at x of pair_xy x group.

    The parents have two objects, so H is a normal subgroup of one isotropy
    group rather than a wide subgroupoid.
    """
    d4 = dihedral_group(4)
    splittings = [
        (symmetric_group_s3(), alternating_subgroup_s3(), {"123", "213"}),
        (d4, d4.elements[:4], {"1", "s"}),
        (klein_four(), {"1", "a"}, {"1", "b"}),
    ]
    cases = []
    for group, h, sub in splittings:
        parent = direct_product([pair_xy(), group], name=f"pair_xy_x_{group.name}")
        cases.append((
            parent,
            frozenset(pack("(x|x)", g) for g in h),
            frozenset(pack("(x|x)", g) for g in sub),
        ))
    return cases



# Random generators ------------------------------------------------------------


def _small_groups(max_order: int) -> List[GroupoidTable]:
    groups = [cyclic_group(m) for m in (1, 2, 3, 4)]
    groups += [klein_four(), symmetric_group_s3(), dihedral_group(3)]
    return [g for g in groups if len(g) <= max_order]


def random_groupoid(rng: np.random.Generator, max_elements: int = 8) -> GroupoidTable:
    """
    A disjoint union of components pair(k) x G with at most max_elements elements.

    G is drawn from Z1-Z4, the Klein four group, S3 and D3 (the last two as
    different tables of the same group). Every finite groupoid whose isotropy
    groups are among these is of this shape up to isomorphism.
    """
    components: List[GroupoidTable] = []
    groups = _small_groups(6)
    budget = max_elements
    while budget >= 1 and (not components or rng.random() < 0.5):
        options = [(k, g) for k in (1, 2, 3) for g in groups if k * k * len(g) <= budget]
        k, base = options[int(rng.integers(len(options)))]
        i = len(components)
        pair = pair_groupoid([f"o{i}{chr(ord('a') + j)}" for j in range(k)], name=f"P{i}")
        group = rename(base, lambda g, i=i: f"{g}.{i}", name=f"{base.name}.{i}")
        components.append(direct_product([pair, group], name=f"C{i}"))
        budget -= k * k * len(base)
    t = disjoint_union(components, name=f"rand{len(components)}")
    logger.debug(f"Random groupoid {t.name}: {len(t)} elements, {len(components)} components")
    return t


def coset_action(t: GroupoidTable, orbits: Sequence[Tuple[str, FrozenSet[str]]],
                 name: str = "cosets") -> PartialActionTable:
    """
    Global strict action on cosets.

    For the i-th pair (e, K), with K a subgroup of the isotropy group at e, the
    points are the cosets hK of the elements h with d(h) = e, named rep@i after
    their first element, and g·hK = (gh)K. Every transitive global action is
    of this form, and a trivial K gives the star of e.
    """
    carrier: List[Point] = []
    rep_of: Dict[Point, Tuple[str, int]] = {}
    point_of: Dict[Tuple[str, int], Point] = {}
    for i, (e, k) in enumerate(orbits):
        for h in t.by_domain[e]:
            if (h, i) in point_of:
                continue
            coset = t.sort(t.compose(h, c) for c in k)
            point = f"{coset[0]}@{i}"
            carrier.append(point)
            rep_of[point] = (coset[0], i)
            point_of.update(((member, i), point) for member in coset)
    act: Dict[Tuple[str, Point], Point] = {}
    for point, (h, i) in rep_of.items():
        for g in t.by_domain[t.r(h)]:
            act[(g, point)] = point_of[(t.compose(g, h), i)]
    return PartialActionTable(name, t, tuple(carrier), act)


def star_action(t: GroupoidTable, sources: Sequence[str], name: str = "star") -> PartialActionTable:
    """
    Global strict action by left translation on stars: points h@i for each
    listed source object (repeats give disjoint copies) and h with d(h) = source.
    """
    return coset_action(t, [(e, frozenset({e})) for e in sources], name=name)


def random_isotropy_subgroup(rng: np.random.Generator, t: GroupoidTable, e: str) -> FrozenSet[str]:
    """The trivial subgroup at e half of the time, otherwise one generated by a random element."""
    if rng.random() < 0.5:
        return frozenset({e})
    local = t.sort(isotropy_group(t, e))
    return generated_subgroupoid(t, [local[int(rng.integers(len(local)))]])


def random_global_action(rng: np.random.Generator, t: GroupoidTable,
                         max_points: int = 6) -> PartialActionTable:
    """
    A strict global coset action with at most max_points points (at least one orbit).

    An orbit that would be too large is replaced by the orbit of the whole
    isotropy group, which has one point per object of the component.
    """

    def draw(e: str) -> FrozenSet[str]:
        k = random_isotropy_subgroup(rng, t, e)
        if len(t.by_domain[e]) // len(k) > max_points:
            k = isotropy_group(t, e)
        return k

    fitting = [e for e in t.object_list
               if len(t.by_domain[e]) // len(isotropy_group(t, e)) <= max_points]
    if not fitting:
        raise FormatError(f"{t.name}: every orbit exceeds {max_points} points")
    order = [fitting[int(i)] for i in rng.permutation(len(fitting))]
    chosen = [(order[0], draw(order[0]))]
    size = len(t.by_domain[order[0]]) // len(chosen[0][1])
    for e in order[1:] + order:
        k = draw(e)
        extra = len(t.by_domain[e]) // len(k)
        if size + extra <= max_points and rng.random() < 0.5:
            chosen.append((e, k))
            size += extra
    return coset_action(t, chosen, name="glob")


def random_partial_action(rng: np.random.Generator, t: GroupoidTable,
                          max_points: int = 6) -> PartialActionTable:
    """
    A strict partial action: a global coset action restricted to a random subset.

    Every strict partial action is the restriction of its globalization, so
    these reach every strict partial action up to isomorphism.
    """
    q = random_global_action(rng, t, max_points=max_points)
    mask = rng.random(len(q.carrier)) < rng.uniform(0.4, 0.9)
    keep = [x for x, flag in zip(q.carrier, mask) if flag] or [q.carrier[0]]
    return restrict_action(q, keep, name="part")



def add_extra_identity(p: PartialActionTable, x: Point, f: str) -> PartialActionTable:
    """Let a second object f act trivially on x; makes p non-strict when f != e_x."""
    act = dict(p.act)
    act[(f, x)] = x
    return PartialActionTable(f"{p.name}+{f}", p.groupoid, p.carrier, act)


def random_non_strict_action(rng: np.random.Generator, t: GroupoidTable,
                             max_points: int = 6) -> Optional[PartialActionTable]:
    """A valid non-strict action, or None when t has a single component."""
    components = connected_components(t)
    if len(components) < 2:
        return None
    p = random_partial_action(rng, t, max_points=max_points)
    x = p.carrier[int(rng.integers(len(p.carrier)))]
    home = next(c for c in components if any(p.defined(e, x) for e in c))
    others = [e for c in components if c is not home for e in c]
    return add_extra_identity(p, x, others[int(rng.integers(len(others)))])


def _closure(t: GroupoidTable, gens: Sequence[Dict[str, str]],
             max_group: int) -> Optional[List[Dict[str, str]]]:
    """The permutation group generated by gens, identity first, or None past max_group."""
    identity = {g: g for g in t.elements}
    found = [identity]
    seen = {tuple(t.elements)}
    frontier = [identity]
    while frontier:
        new = []
        for perm in frontier:
            for gen in gens:
                step = {g: gen[perm[g]] for g in t.elements}
                key = tuple(step[g] for g in t.elements)
                if key not in seen:
                    seen.add(key)
                    new.append(step)
        found += new
        if len(found) > max_group:
            return None
        frontier = new
    return found


def random_autaction(rng: np.random.Generator, t: GroupoidTable,
                     max_group: int = 6) -> AutAction:
    """
    A group acting through object-fixing automorphisms, of order at most max_group.

    Half of the time the group is the one generated by two random automorphisms,
    acting faithfully, so it need not be cyclic. Otherwise it is a cyclic group
    acting through the powers of one automorphism, and its order is a multiple
    of that automorphism's order.
    """
    autos = automorphisms(t, fix_objects=True)
    phi, psi = (autos[int(i)] for i in rng.integers(len(autos), size=2))
    if rng.random() < 0.5:
        perms = _closure(t, [phi, psi], max_group)
        if perms is not None:
            ids = ["1"] + [f"w{i}" for i in range(1, len(perms))]
            index = {tuple(perm[g] for g in t.elements): i for i, perm in enumerate(perms)}

            def multiply(g: str, h: str) -> str:
                first, second = perms[ids.index(g)], perms[ids.index(h)]
                return ids[index[tuple(first[second[x]] for x in t.elements)]]

            group = group_table(f"W{len(ids)}", ids, multiply)
            return AutAction(group, t, dict(zip(ids, perms)), name=f"gen{len(ids)}")

    powers = _closure(t, [phi], max_group)
    if powers is None:
        return trivial_action(cyclic_group(int(rng.integers(1, max_group + 1))), t)
    order = len(powers)
    multiple = int(rng.integers(1, max_group // order + 1))
    group = cyclic_group(order * multiple)
    omega = {g: powers[k % order] for k, g in enumerate(group.elements)}
    return AutAction(group, t, omega, name=f"pow{order}")


def random_star_injective(rng: np.random.Generator, t: GroupoidTable,
                          max_points: int = 6) -> GroupoidFunctor:
    """Either the projection of a random partial action or a subgroupoid inclusion."""
    if rng.random() < 0.5:
        return projection_functor(random_partial_action(rng, t, max_points=max_points))
    size = int(rng.integers(1, 3))
    gens = [t.elements[int(i)] for i in rng.choice(len(t), size=size, replace=False)]
    return inclusion_functor(t, generated_subgroupoid(t, gens))


def random_action_morphism(
    rng: np.random.Generator, t: GroupoidTable, max_points: int = 6
) -> Tuple[Dict[Point, Point], PartialActionTable, PartialActionTable]:
    """(f, p, q): the inclusion of a restriction p of a global action q."""
    q = random_global_action(rng, t, max_points=max_points)
    mask = rng.random(len(q.carrier)) < 0.6
    keep = [x for x, flag in zip(q.carrier, mask) if flag] or [q.carrier[-1]]
    p = restrict_action(q, keep, name="sub")
    return {x: x for x in p.carrier}, p, q


def random_star_morphism(
    rng: np.random.Generator, t: GroupoidTable, max_points: int = 6
) -> Tuple[GroupoidFunctor, GroupoidFunctor, GroupoidFunctor]:
    """(f, F1, F2) with F2∘f = F1 between star-injective functors into t."""
    if rng.random() < 0.5:
        f, p, q = random_action_morphism(rng, t, max_points=max_points)
        return lift_action_morphism(f, p, q), projection_functor(p), projection_functor(q)

    gens = [t.elements[int(rng.integers(len(t)))]]
    small = generated_subgroupoid(t, gens)
    large = generated_subgroupoid(t, list(small) + [t.elements[int(rng.integers(len(t)))]])
    F1 = inclusion_functor(t, small, name="incl_K")
    F2 = inclusion_functor(t, large, name="incl_H")
    f = GroupoidFunctor(F1.source, F2.source, {g: g for g in F1.source.elements}, name="incl_KH")
    return f, F1, F2
