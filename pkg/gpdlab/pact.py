"""
Partial actions of finite groupoids on finite sets.

The domain D of an action is stored extensionally as the key set of ``act``;
nothing is inferred. Derived groupoids use packed ids: (g|x) for the action
groupoid and (g|x|y) for the graph groupoid.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from .config import get_settings
from .core import GroupoidFunctor, GroupoidTable, ValidationReport, pack, require_isomorphism
from .errors import AxiomError, FormatError, StrictnessError

Point = str
ActKey = Tuple[str, Point]


@dataclass(frozen=True)
class PartialActionTable:
    """A partial map (g, x) ↦ g·x of a groupoid on a finite set."""

    name: str
    groupoid: GroupoidTable
    carrier: Tuple[Point, ...]
    act: Mapping[ActKey, Point] = field(hash=False)

    def __post_init__(self) -> None:
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        if len(set(carrier)) != len(carrier):
            raise FormatError(f"{self.name}: duplicate points in the carrier")
        points = set(carrier)
        for (g, x), y in self.act.items():
            if g not in self.groupoid:
                raise FormatError(f"{self.name}: act uses unknown element {g}")
            if x not in points or y not in points:
                raise FormatError(f"{self.name}: act {g}·{x} = {y} uses an unknown point")

    @cached_property
    def point_index(self) -> Dict[Point, int]:
        return {x: i for i, x in enumerate(self.carrier)}

    @cached_property
    def domain(self) -> List[ActKey]:
        """D in (element order, point order)."""
        t = self.groupoid
        return sorted(self.act, key=lambda key: (t.index[key[0]], self.point_index[key[1]]))

    @cached_property
    def acting(self) -> Dict[Point, List[str]]:
        """Point -> elements g with ∃g·x, in declared order."""
        result: Dict[Point, List[str]] = {x: [] for x in self.carrier}
        for g, x in self.domain:
            result[x].append(g)
        return result

    def __contains__(self, key: object) -> bool:
        return key in self.act

    def defined(self, g: str, x: Point) -> bool:
        return (g, x) in self.act

    def apply(self, g: str, x: Point) -> Optional[Point]:
        """g·x, or None when undefined."""
        return self.act.get((g, x))

    def sort_points(self, points: Iterable[Point]) -> List[Point]:
        return sorted(points, key=self.point_index.__getitem__)


def validate_partial_action(p: PartialActionTable) -> ValidationReport:
    """
    Check PGrA1-PGrA3 and both directions of the range-identity lemma, each
    under its own tag.

    Tags: PGrA1, PGrA2, PGrA3, range-identity (∃g·x implies ∃r(g)·(g·x)) and
    range-identity-converse (∃r(g)·y and ∃g⁻¹·y imply ∃g·(g⁻¹·y) = y). Global
    actions are not required here; see is_global.
    """
    t = p.groupoid
    report = ValidationReport(subject=f"partial action {p.name} of {t.name}")
    logger.debug(f"Validating partial action {p.name}: |X|={len(p.carrier)}, |D|={len(p.act)}")

    for x in p.carrier:
        identities = [e for e in p.acting[x] if t.is_object(e)]
        if not identities:
            report.add("PGrA1", (x,), f"no identity acts on {x}")
        for e in identities:
            if p.apply(e, x) != x:
                report.add("PGrA1", (e, x), f"{e}·{x} = {p.apply(e, x)}, expected {x}")

    for g, x in p.domain:
        y = p.act[(g, x)]
        g_inv = t.inverse(g)
        back = p.apply(g_inv, y)
        if back is None:
            report.add("PGrA2", (g, x), f"{g}·{x} = {y} but {g_inv}·{y} is undefined")
        elif back != x:
            report.add("PGrA2", (g, x), f"{g_inv}·({g}·{x}) = {back}, expected {x}")

        if not p.defined(t.r(g), y):
            report.add("range-identity", (g, x), f"{g}·{x} = {y} but {t.r(g)}·{y} is undefined")

    for e, y in p.domain:
        if not t.is_object(e):
            continue
        for g in t.by_range[e]:
            x = p.apply(t.inverse(g), y)
            if x is None:
                continue
            gx = p.apply(g, x)
            if gx is None:
                report.add(
                    "range-identity-converse", (g, x),
                    f"{e}·{y} and {t.inverse(g)}·{y} = {x} exist but {g}·{x} is undefined",
                )
            elif gx != y:
                report.add("range-identity-converse", (g, x), f"{g}·{x} = {gx}, expected {y}")

    for h, x in p.domain:
        hx = p.act[(h, x)]
        for g in t.by_domain[t.r(h)]:
            ghx = p.apply(g, hx)
            if ghx is None:
                continue
            gh = t.compose(g, h)
            if gh is None:
                report.add("PGrA3", (g, h, x), f"{g}∘{h} undefined in {t.name}")
                continue
            direct = p.apply(gh, x)
            if direct is None:
                report.add("PGrA3", (g, h, x), f"{g}·({h}·{x}) = {ghx} but ({gh})·{x} is undefined")
            elif direct != ghx:
                report.add("PGrA3", (g, h, x), f"{g}·({h}·{x}) = {ghx} but ({gh})·{x} = {direct}")

    if report.passed:
        logger.debug(f"Partial action {p.name} satisfies PGrA1-PGrA3")
    else:
        logger.warning(f"Partial action {p.name} violates {report.tags()}")
    return report


def require_partial_action(p: PartialActionTable) -> None:
    """
    Raises:
        AxiomError: If p violates any partial action axiom
    """
    validate_partial_action(p).raise_if_failed(AxiomError)


def identity_sets(p: PartialActionTable) -> Dict[str, FrozenSet[Point]]:
    """X_e = {x : ∃e·x} for every object e."""
    t = p.groupoid
    return {e: frozenset(x for x in p.carrier if p.defined(e, x)) for e in t.object_list}


def first_non_strict_point(p: PartialActionTable) -> Optional[Point]:
    for x in p.carrier:
        if sum(1 for g in p.acting[x] if p.groupoid.is_object(g)) > 1:
            return x
    return None


def is_strict(p: PartialActionTable) -> bool:
    """True iff the sets X_e are pairwise disjoint."""
    return first_non_strict_point(p) is None


def is_global(p: PartialActionTable) -> bool:
    """PGrA4: ∃d(g)·x implies ∃g·x."""
    t = p.groupoid
    return all(
        p.defined(g, x)
        for g in t.elements
        for x in p.carrier
        if p.defined(t.d(g), x)
    )


def domain_set(p: PartialActionTable, g: str) -> FrozenSet[Point]:
    """X_g = {x : ∃g⁻¹·x}."""
    p.groupoid.require((g,))
    g_inv = p.groupoid.inverse(g)
    return frozenset(x for x in p.carrier if p.defined(g_inv, x))


def point_object_index(p: PartialActionTable) -> Dict[Point, str]:
    """
    The unique object e_x with ∃e_x·x for every point.

    Raises:
        StrictnessError: If some point admits two identities
        AxiomError: If some point admits none
    """
    index: Dict[Point, str] = {}
    for x in p.carrier:
        identities = [g for g in p.acting[x] if p.groupoid.is_object(g)]
        if len(identities) > 1:
            message = f"{p.name} is not strict: {identities[0]} and {identities[1]} both act on {x}"
            logger.warning(message)
            raise StrictnessError(message, witnesses=(x,))
        if not identities:
            raise AxiomError(f"{p.name}: no identity acts on {x}", witnesses=(x,))
        index[x] = identities[0]
    return index


def require_strict(p: PartialActionTable) -> Dict[Point, str]:
    """Validate p and return its point-object index."""
    require_partial_action(p)
    return point_object_index(p)


# Derived groupoids ------------------------------------------------------------


def action_groupoid(p: PartialActionTable, name: Optional[str] = None) -> GroupoidTable:
    """
    The action groupoid (G, X).

    Elements (g|x) for (g, x) ∈ D; (g|x)(h|y) is defined iff d(g) = r(h) and
    x = h·y, and equals (gh|y); d(g|x) = (d(g)|x), r(g|x) = (r(g)|g·x).

    Raises:
        AxiomError: If p is not a valid partial action
    """
    require_partial_action(p)
    t = p.groupoid
    elements = [pack(g, x) for g, x in p.domain]
    objects = {pack(g, x) for g, x in p.domain if t.is_object(g)}
    dmap, rmap, inv = {}, {}, {}
    for g, x in p.domain:
        y = p.act[(g, x)]
        key = pack(g, x)
        dmap[key] = pack(t.d(g), x)
        rmap[key] = pack(t.r(g), y)
        inv[key] = pack(t.inverse(g), y)

    comp = {}
    for h, y in p.domain:
        x = p.act[(h, y)]
        for g in t.by_domain[t.r(h)]:
            if p.defined(g, x):
                comp[(pack(g, x), pack(h, y))] = pack(t.compose(g, h), y)

    return GroupoidTable(name or f"({t.name},{p.name})", tuple(elements), frozenset(objects),
                         dmap, rmap, inv, comp)


def graph_groupoid(p: PartialActionTable, name: Optional[str] = None) -> GroupoidTable:
    """
    The graph groupoid Gr(α) of triples (g|x|y) with g·x = y.

    (g|x|y)∘(h|v|x) = (gh|v|y); d(g|x|y) = (d(g)|x|x), r(g|x|y) = (r(g)|y|y)
    and (g|x|y)⁻¹ = (g⁻¹|y|x).
    """
    require_partial_action(p)
    t = p.groupoid
    triples = [(g, x, p.act[(g, x)]) for g, x in p.domain]
    elements = [pack(*triple) for triple in triples]
    objects = {pack(g, x, y) for g, x, y in triples if t.is_object(g)}
    dmap = {pack(g, x, y): pack(t.d(g), x, x) for g, x, y in triples}
    rmap = {pack(g, x, y): pack(t.r(g), y, y) for g, x, y in triples}
    inv = {pack(g, x, y): pack(t.inverse(g), y, x) for g, x, y in triples}

    comp = {}
    for h, v, x in triples:
        for g in t.by_domain[t.r(h)]:
            y = p.apply(g, x)
            if y is not None:
                comp[(pack(g, x, y), pack(h, v, x))] = pack(t.compose(g, h), v, y)

    return GroupoidTable(name or f"Gr({p.name})", tuple(elements), frozenset(objects),
                         dmap, rmap, inv, comp)


def graph_iso(p: PartialActionTable) -> GroupoidFunctor:
    """
    The isomorphism (G, X) → Gr(α), (g|x) ↦ (g|x|g·x).

    Raises:
        NotFunctorialError: If the map fails verification
    """
    source = action_groupoid(p)
    target = graph_groupoid(p)
    mapping = {pack(g, x): pack(g, x, p.act[(g, x)]) for g, x in p.domain}
    F = GroupoidFunctor(source, target, mapping, name="graph_iso")
    require_isomorphism(F)
    logger.success(f"Verified (G,X) ≅ Gr({p.name}) on {len(mapping)} elements")
    return F


# Morphisms and constructions -------------------------------------------------


def _require_map(f: Mapping[Point, Point], p: PartialActionTable, q: PartialActionTable) -> None:
    missing = [x for x in p.carrier if x not in f]
    if missing:
        raise FormatError(f"point map is not total on {p.name}: missing {missing}")
    outside = sorted({f[x] for x in p.carrier if f[x] not in q.point_index})
    if outside:
        raise FormatError(f"point map sends points outside {q.name}: {outside}")


def action_morphism_report(f: Mapping[Point, Point], p: PartialActionTable,
                           q: PartialActionTable) -> ValidationReport:
    """Violations of ∃g·f(x) and f(g·x) = g·f(x) over D_p (tag: equivariance)."""
    _require_map(f, p, q)
    report = ValidationReport(subject=f"morphism {p.name} -> {q.name}")
    for g, x in p.domain:
        image = q.apply(g, f[x])
        if image is None:
            report.add("equivariance", (g, x), f"{g}·{f[x]} is undefined in {q.name}")
        elif image != f[p.act[(g, x)]]:
            report.add("equivariance", (g, x), f"f({g}·{x}) = {f[p.act[(g, x)]]} but {g}·f({x}) = {image}")
    return report


def is_action_morphism(f: Mapping[Point, Point], p: PartialActionTable,
                       q: PartialActionTable) -> bool:
    """
    True iff for every (g, x) ∈ D_p, ∃g·f(x) and f(g·x) = g·f(x).

    Raises:
        FormatError: If f is not total on the carrier of p
    """
    return action_morphism_report(f, p, q).passed


def is_action_isomorphism(f: Mapping[Point, Point], p: PartialActionTable,
                          q: PartialActionTable) -> bool:
    """An equivariant bijection whose inverse is also equivariant."""
    _require_map(f, p, q)
    if len({f[x] for x in p.carrier}) != len(q.carrier) or len(p.carrier) != len(q.carrier):
        return False
    inverse = {f[x]: x for x in p.carrier}
    return is_action_morphism(f, p, q) and is_action_morphism(inverse, q, p)


def _iter_action_isomorphisms(p: PartialActionTable, q: PartialActionTable) -> Iterator[Dict[Point, Point]]:
    if len(p.carrier) != len(q.carrier):
        return
    signature_q: Dict[Tuple[str, ...], List[Point]] = {}
    for y in q.carrier:
        signature_q.setdefault(tuple(q.acting[y]), []).append(y)
    limit = get_settings().brute_force_map_limit
    visited = 0
    order = list(p.carrier)
    f: Dict[Point, Point] = {}
    used: set = set()

    def consistent(x: Point) -> bool:
        for g in p.acting[x]:
            y = p.act[(g, x)]
            if y in f and q.apply(g, f[x]) != f[y]:
                return False
            back = p.groupoid.inverse(g)
            source = p.apply(back, x)
            if source is not None and source in f and q.apply(g, f[source]) != f[x]:
                return False
        return True

    def extend(i: int) -> Iterator[Dict[Point, Point]]:
        nonlocal visited
        if i == len(order):
            yield dict(f)
            return
        x = order[i]
        for y in signature_q.get(tuple(p.acting[x]), []):
            if y in used:
                continue
            visited += 1
            if visited > limit:
                logger.warning(f"Action isomorphism search {p.name} -> {q.name} stopped at {limit} nodes")
                return
            f[x] = y
            used.add(y)
            if consistent(x):
                yield from extend(i + 1)
            del f[x]
            used.discard(y)

    yield from extend(0)


def find_action_isomorphism(p: PartialActionTable, q: PartialActionTable) -> Optional[Dict[Point, Point]]:
    """
    Search for an equivariant bijection p → q.

    Returns:
        dict: The first isomorphism found, or None
    """
    if p.groupoid.elements != q.groupoid.elements:
        return None
    for f in _iter_action_isomorphisms(p, q):
        if is_action_isomorphism(f, p, q):
            return f
    return None


def restrict_action(p: PartialActionTable, points: Iterable[Point], name: Optional[str] = None) -> PartialActionTable:
    """Keep g·x exactly when x and g·x both lie in the subset."""
    keep = set(points)
    unknown = keep - set(p.carrier)
    if unknown:
        raise FormatError(f"{p.name}: unknown points {sorted(unknown)}")
    return PartialActionTable(
        name or f"{p.name}|",
        p.groupoid,
        tuple(x for x in p.carrier if x in keep),
        {(g, x): y for (g, x), y in p.act.items() if x in keep and y in keep},
    )


def drop_pairs(p: PartialActionTable, pairs: Iterable[ActKey], name: Optional[str] = None) -> PartialActionTable:
    """Remove domain pairs; the result is usually not a partial action (negative fixtures)."""
    remove = set(pairs)
    return PartialActionTable(
        name or p.name, p.groupoid, p.carrier,
        {key: y for key, y in p.act.items() if key not in remove},
    )


def disjoint_union_actions(p: PartialActionTable, q: PartialActionTable,
                           name: Optional[str] = None) -> PartialActionTable:
    """
    Coproduct of two actions of the same groupoid.

    Raises:
        FormatError: If the groupoids differ or the carriers overlap
    """
    if p.groupoid.elements != q.groupoid.elements:
        raise FormatError(f"{p.name} and {q.name} act through different groupoids")
    overlap = set(p.carrier) & set(q.carrier)
    if overlap:
        raise FormatError(f"carriers of {p.name} and {q.name} overlap in {sorted(overlap)}")
    act = dict(p.act)
    act.update(q.act)
    return PartialActionTable(name or f"{p.name}+{q.name}", p.groupoid, p.carrier + q.carrier, act)


def relabel_points(p: PartialActionTable, mapping: Mapping[Point, Point],
                   name: Optional[str] = None) -> PartialActionTable:
    """Rename points through an injective map."""
    if len({mapping[x] for x in p.carrier}) != len(p.carrier):
        raise FormatError(f"{p.name}: point relabelling is not injective")
    return PartialActionTable(
        name or p.name,
        p.groupoid,
        tuple(mapping[x] for x in p.carrier),
        {(g, mapping[x]): mapping[y] for (g, x), y in p.act.items()},
    )


def identity_action(t: GroupoidTable, carrier: Sequence[Point], objects: Mapping[Point, str],
                    name: str = "identity") -> PartialActionTable:
    """The action where only the chosen identity e_x acts on each x."""
    return PartialActionTable(name, t, tuple(carrier), {(objects[x], x): x for x in carrier})
