"""
Finite groupoid tables.

Defines the explicit-table representation of a finite groupoid, the axiom
validator, functors between tables and the basic constructors and structural
queries everything else is built on.

Composition convention: comp(g, h) is "g after h" and is defined exactly when
d(g) = r(h).
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, computed_field

from .config import get_settings
from .errors import AxiomError, FormatError, NotFunctorialError

Pair = Tuple[str, str]


def pack(*parts: str) -> str:
    """
    Serialize a tuple of ids as a single element id, e.g. ``(a|b)``.

    Args:
        *parts: Component ids

    Returns:
        str: Tuple id used as a table key
    """
    return "(" + "|".join(parts) + ")"


class Violation(BaseModel):
    """One violated axiom instance with its witnessing elements."""

    model_config = ConfigDict(frozen=True)

    tag: str
    witnesses: Tuple[str, ...]
    message: str


class ValidationReport(BaseModel):
    """
    Structured outcome of an axiom scan.

    ``passed`` is true exactly when no violation was recorded. Only the first
    ``report_witness_limit`` violations per tag are stored; the remainder is
    counted in ``overflow``.
    """

    subject: str = ""
    violations: List[Violation] = Field(default_factory=list)
    overflow: Dict[str, int] = Field(default_factory=dict)

    _counts: Dict[str, int] = PrivateAttr(default_factory=dict)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, tag: str, witnesses: Sequence[str], message: str) -> None:
        """
        Record a violation.

        Args:
            tag: Axiom tag (e.g. 'associativity', 'PGrA2')
            witnesses: Elements or points exhibiting the failure
            message: Human-readable explanation
        """
        count = self._counts.get(tag, 0)
        self._counts[tag] = count + 1
        if count >= get_settings().report_witness_limit:
            self.overflow[tag] = self.overflow.get(tag, 0) + 1
            return
        self.violations.append(Violation(tag=tag, witnesses=tuple(witnesses), message=message))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        """Copy all violations of another report, optionally prefixing their tags."""
        for violation in other.violations:
            self.add(f"{prefix}{violation.tag}", violation.witnesses, violation.message)

    def tags(self) -> List[str]:
        """Violated tags in first-seen order."""
        seen: List[str] = []
        for violation in self.violations:
            if violation.tag not in seen:
                seen.append(violation.tag)
        return seen

    def first(self, tag: str) -> Optional[Violation]:
        """First recorded violation for a tag, or None."""
        return next((v for v in self.violations if v.tag == tag), None)

    def witnesses(self, tag: str) -> List[Tuple[str, ...]]:
        """All stored witness tuples for a tag."""
        return [v.witnesses for v in self.violations if v.tag == tag]

    def to_frame(self) -> pd.DataFrame:
        """Render the violations as a DataFrame (tag, witnesses, message)."""
        return pd.DataFrame(
            [
                {"tag": v.tag, "witnesses": ", ".join(v.witnesses), "message": v.message}
                for v in self.violations
            ],
            columns=["tag", "witnesses", "message"],
        )

    def raise_if_failed(self, exc_type: type = AxiomError, message: Optional[str] = None) -> None:
        """
        Raise ``exc_type`` carrying this report when it did not pass.

        Raises:
            AxiomError: (or the given subclass) if any violation was recorded
        """
        if self.passed:
            return
        first = self.violations[0]
        text = message or f"{self.subject}: {first.tag} violated ({first.message})"
        logger.warning(text)
        raise exc_type(text, report=self, witnesses=first.witnesses)


@dataclass(frozen=True, eq=True)
class GroupoidTable:
    """
    A finite groupoid as an explicit element list plus a partial composition table.

    Instances are treated as immutable; derived indexes are cached on first use.
    Construction only checks structural well-formedness (every map total over the
    declared elements, no unknown ids). Axioms are checked by validate_groupoid.
    """

    name: str
    elements: Tuple[str, ...]
    objects: frozenset
    dmap: Mapping[str, str] = field(hash=False)
    rmap: Mapping[str, str] = field(hash=False)
    inv: Mapping[str, str] = field(hash=False)
    comp: Mapping[Pair, str] = field(hash=False)

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "objects", frozenset(self.objects))

        known = set(elements)
        if len(known) != len(elements):
            duplicates = sorted({g for g in elements if elements.count(g) > 1})
            raise FormatError(f"{self.name}: duplicate element ids {duplicates}")
        if not self.objects:
            raise FormatError(f"{self.name}: a groupoid needs at least one object")
        unknown_objects = sorted(self.objects - known)
        if unknown_objects:
            raise FormatError(f"{self.name}: objects not among elements: {unknown_objects}")

        for label, mapping in (("d", self.dmap), ("r", self.rmap), ("inv", self.inv)):
            missing = [g for g in elements if g not in mapping]
            if missing:
                raise FormatError(f"{self.name}: map {label} undefined on {missing}")
            extra = sorted(set(mapping) - known)
            if extra:
                raise FormatError(f"{self.name}: map {label} mentions unknown ids {extra}")
            bad = sorted({v for v in mapping.values() if v not in known})
            if bad:
                raise FormatError(f"{self.name}: map {label} has unknown values {bad}")

        for label, mapping in (("d", self.dmap), ("r", self.rmap)):
            not_objects = [g for g in elements if mapping[g] not in self.objects]
            if not_objects:
                raise FormatError(
                    f"{self.name}: map {label} sends {not_objects[0]} to non-object "
                    f"{mapping[not_objects[0]]}"
                )

        for (g, h), k in self.comp.items():
            if g not in known or h not in known or k not in known:
                raise FormatError(f"{self.name}: comp entry ({g}, {h}) = {k} uses unknown ids")

    # Derived indexes -------------------------------------------------------

    @cached_property
    def index(self) -> Dict[str, int]:
        """Position of each element in declared order."""
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def object_list(self) -> List[str]:
        """Objects in declared element order."""
        return [g for g in self.elements if g in self.objects]

    @cached_property
    def by_domain(self) -> Dict[str, List[str]]:
        """Object -> elements with that domain (the star), in declared order."""
        stars: Dict[str, List[str]] = {e: [] for e in self.object_list}
        for g in self.elements:
            stars[self.dmap[g]].append(g)
        return stars

    @cached_property
    def by_range(self) -> Dict[str, List[str]]:
        """Object -> elements with that range, in declared order."""
        costars: Dict[str, List[str]] = {e: [] for e in self.object_list}
        for g in self.elements:
            costars[self.rmap[g]].append(g)
        return costars

    @cached_property
    def composable_pairs(self) -> List[Pair]:
        """All (g, h) with d(g) = r(h), ordered by (index g, index h)."""
        return [(g, h) for g in self.elements for h in self.by_range[self.dmap[g]]]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.index

    def d(self, g: str) -> str:
        return self.dmap[g]

    def r(self, g: str) -> str:
        return self.rmap[g]

    def inverse(self, g: str) -> str:
        return self.inv[g]

    def is_object(self, g: str) -> bool:
        return g in self.objects

    def composable(self, g: str, h: str) -> bool:
        return self.dmap[g] == self.rmap[h]

    def compose(self, g: str, h: str) -> Optional[str]:
        """Product g∘h, or None when it is not in the table."""
        return self.comp.get((g, h))

    def star(self, e: str) -> List[str]:
        return self.by_domain[e]

    def hom(self, source: str, target: str) -> List[str]:
        """Elements g with d(g) = source and r(g) = target."""
        return [g for g in self.by_domain[source] if self.rmap[g] == target]

    def sort(self, members: Iterable[str]) -> List[str]:
        """Members sorted in declared element order."""
        return sorted(members, key=self.index.__getitem__)

    def require(self, members: Iterable[str], what: str = "element") -> None:
        """
        Check that all ids are elements of this table.

        Raises:
            FormatError: If any id is unknown
        """
        unknown = [g for g in members if g not in self.index]
        if unknown:
            raise FormatError(f"{self.name}: unknown {what} ids {unknown}")


def compose_chain(t: GroupoidTable, chain: Sequence[str]) -> Optional[str]:
    """
    Compose g1∘g2∘...∘gn left to right.

    Args:
        t: Groupoid table
        chain: Non-empty element sequence

    Returns:
        str: The product, or None if some partial product is undefined
    """
    acc: Optional[str] = chain[0]
    for g in chain[1:]:
        if acc is None:
            return None
        acc = t.compose(acc, g)
    return acc


def validate_groupoid(t: GroupoidTable) -> ValidationReport:
    """
    Check every groupoid axiom on a table.

    Tags: identity, composability, domain-range, inverse, involution,
    inverse-product, associativity. Witnesses are listed in declared order.

    Args:
        t: Structurally well-formed table

    Returns:
        ValidationReport: Every violated axiom with witnesses
    """
    report = ValidationReport(subject=f"groupoid {t.name}")
    logger.debug(f"Validating groupoid {t.name} ({len(t)} elements, {len(t.comp)} products)")

    for e in t.object_list:
        if t.d(e) != e or t.r(e) != e:
            report.add("identity", (e,), f"object {e} has d={t.d(e)}, r={t.r(e)}")
        if t.inverse(e) != e:
            report.add("identity", (e,), f"object {e} has inverse {t.inverse(e)}")
        for g in t.by_range[e]:
            product_ = t.compose(e, g)
            if product_ is not None and product_ != g:
                report.add("identity", (e, g), f"{e}∘{g} = {product_}, expected {g}")
        for g in t.by_domain[e]:
            product_ = t.compose(g, e)
            if product_ is not None and product_ != g:
                report.add("identity", (g, e), f"{g}∘{e} = {product_}, expected {g}")

    composable = set(t.composable_pairs)
    for g, h in t.composable_pairs:
        if (g, h) not in t.comp:
            report.add("composability", (g, h),
                       f"d({g})={t.d(g)}=r({h}) but {g}∘{h} is undefined")
    for (g, h), k in t.comp.items():
        if (g, h) not in composable:
            report.add("composability", (g, h),
                       f"{g}∘{h} = {k} is defined but d({g})={t.d(g)} != r({h})={t.r(h)}")

    for g, h in t.composable_pairs:
        k = t.compose(g, h)
        if k is None:
            continue
        if t.d(k) != t.d(h) or t.r(k) != t.r(g):
            report.add("domain-range", (g, h, k),
                       f"{g}∘{h} = {k} but d/r of {k} are {t.d(k)}/{t.r(k)}, "
                       f"expected {t.d(h)}/{t.r(g)}")
        inverse_product = t.compose(t.inverse(h), t.inverse(g))
        if inverse_product is not None and t.inverse(k) != inverse_product:
            report.add("inverse-product", (g, h),
                       f"({g}∘{h})^-1 = {t.inverse(k)} but {h}^-1∘{g}^-1 = {inverse_product}")

    for g in t.elements:
        g_inv = t.inverse(g)
        if t.inverse(g_inv) != g:
            report.add("involution", (g,), f"inverse of {g_inv} is {t.inverse(g_inv)}, not {g}")
        left = t.compose(g_inv, g)
        if left != t.d(g):
            report.add("inverse", (g,), f"{g_inv}∘{g} = {left}, expected d({g}) = {t.d(g)}")
        right = t.compose(g, g_inv)
        if right != t.r(g):
            report.add("inverse", (g,), f"{g}∘{g_inv} = {right}, expected r({g}) = {t.r(g)}")

    for g, h in t.composable_pairs:
        gh = t.compose(g, h)
        if gh is None:
            continue
        for k in t.by_range[t.d(h)]:
            hk = t.compose(h, k)
            if hk is None:
                continue
            left = t.compose(gh, k)
            right = t.compose(g, hk)
            if left is not None and right is not None and left != right:
                report.add("associativity", (g, h, k),
                           f"({g}∘{h})∘{k} = {left} but {g}∘({h}∘{k}) = {right}")

    if report.passed:
        logger.debug(f"Groupoid {t.name} passed all axioms")
    else:
        logger.warning(f"Groupoid {t.name} violates {report.tags()}")
    return report


def require_groupoid(t: GroupoidTable) -> None:
    """
    Raise unless the table is a groupoid.

    Raises:
        AxiomError: With the validation report attached
    """
    validate_groupoid(t).raise_if_failed(AxiomError)


# Structural queries ---------------------------------------------------------


def isotropy_group(t: GroupoidTable, e: str) -> frozenset:
    """
    Isotropy group G_e = {g : d(g) = r(g) = e}.

    Raises:
        FormatError: If e is not an object of t
    """
    if e not in t.objects:
        raise FormatError(f"{t.name}: {e} is not an object")
    return frozenset(g for g in t.by_domain[e] if t.r(g) == e)


def iso_subgroupoid(t: GroupoidTable) -> frozenset:
    """Iso(G): the union of all isotropy groups."""
    return frozenset(g for g in t.elements if t.d(g) == t.r(g))


def is_connected(t: GroupoidTable) -> bool:
    """True iff every ordered pair of objects is linked by some element."""
    linked = {(t.d(g), t.r(g)) for g in t.elements}
    return all((e, f) in linked for e in t.object_list for f in t.object_list)


def connected_components(t: GroupoidTable) -> List[List[str]]:
    """
    Object sets of the connected components, each in declared order.

    Returns:
        list: Components ordered by their first object
    """
    parent = {e: e for e in t.object_list}

    def find(e: str) -> str:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for g in t.elements:
        a, b = find(t.d(g)), find(t.r(g))
        if a != b:
            parent[max(a, b, key=t.index.__getitem__)] = min(a, b, key=t.index.__getitem__)

    components: Dict[str, List[str]] = {}
    for e in t.object_list:
        components.setdefault(find(e), []).append(e)
    return list(components.values())


# Constructors ---------------------------------------------------------------


def pair_groupoid(objs: Sequence[str], name: str = "pair") -> GroupoidTable:
    """
    Coarse (pair) groupoid on a set: one arrow (x|y) from x to y for every pair.

    Args:
        objs: Non-empty object ids (duplicates ignored, order kept)
        name: Table name

    Returns:
        GroupoidTable: Elements (x|y), with (y|z)∘(x|y) = (x|z)

    Raises:
        FormatError: If objs is empty
    """
    points = list(dict.fromkeys(objs))
    if not points:
        raise FormatError("pair groupoid needs a non-empty object set")

    elements = [pack(x, y) for x, y in product(points, points)]
    objects = {pack(x, x) for x in points}
    dmap = {pack(x, y): pack(x, x) for x, y in product(points, points)}
    rmap = {pack(x, y): pack(y, y) for x, y in product(points, points)}
    inv = {pack(x, y): pack(y, x) for x, y in product(points, points)}
    comp = {
        (pack(y, z), pack(x, y)): pack(x, z)
        for x, y, z in product(points, points, points)
    }
    logger.debug(f"Built pair groupoid on {len(points)} objects")
    return GroupoidTable(name, tuple(elements), frozenset(objects), dmap, rmap, inv, comp)


def restrict(t: GroupoidTable, members: Iterable[str], name: Optional[str] = None) -> GroupoidTable:
    """
    The table on a subset of elements, keeping products that stay inside.

    Args:
        t: Parent table
        members: Subset closed under d, r and inverse
        name: Name of the new table

    Returns:
        GroupoidTable: Restricted table (elements in parent order)

    Raises:
        FormatError: If members are unknown or not closed under d, r, inverse
    """
    keep = set(members)
    t.require(keep)
    for g in keep:
        for label, value in (("d", t.d(g)), ("r", t.r(g)), ("inverse", t.inverse(g))):
            if value not in keep:
                raise FormatError(f"{t.name}: subset not closed under {label} at {g} -> {value}")

    elements = tuple(g for g in t.elements if g in keep)
    return GroupoidTable(
        name or f"{t.name}_sub",
        elements,
        frozenset(keep & t.objects),
        {g: t.d(g) for g in elements},
        {g: t.r(g) for g in elements},
        {g: t.inverse(g) for g in elements},
        {(g, h): k for (g, h), k in t.comp.items() if g in keep and h in keep and k in keep},
    )


def rename(t: GroupoidTable, mapping: Union[Mapping[str, str], Callable[[str], str]],
           name: Optional[str] = None) -> GroupoidTable:
    """
    Relabel every element id.

    Args:
        t: Table to relabel
        mapping: Dict or callable giving the new id for each old id
        name: Name of the new table

    Returns:
        GroupoidTable: Isomorphic copy with new ids
    """
    f = mapping if callable(mapping) else mapping.__getitem__
    new = {g: f(g) for g in t.elements}
    if len(set(new.values())) != len(new):
        raise FormatError(f"{t.name}: relabelling is not injective")
    return GroupoidTable(
        name or t.name,
        tuple(new[g] for g in t.elements),
        frozenset(new[e] for e in t.objects),
        {new[g]: new[t.d(g)] for g in t.elements},
        {new[g]: new[t.r(g)] for g in t.elements},
        {new[g]: new[t.inverse(g)] for g in t.elements},
        {(new[g], new[h]): new[k] for (g, h), k in t.comp.items()},
    )


def disjoint_union(tables: Sequence[GroupoidTable], name: Optional[str] = None) -> GroupoidTable:
    """
    Coproduct of groupoids with pairwise disjoint element ids.

    Raises:
        FormatError: If the list is empty or ids collide
    """
    if not tables:
        raise FormatError("disjoint union of an empty family")
    elements: List[str] = []
    for t in tables:
        elements.extend(t.elements)
    if len(set(elements)) != len(elements):
        raise FormatError("disjoint union needs pairwise disjoint element ids; rename first")

    dmap: Dict[str, str] = {}
    rmap: Dict[str, str] = {}
    inv: Dict[str, str] = {}
    comp: Dict[Pair, str] = {}
    for t in tables:
        dmap.update(t.dmap)
        rmap.update(t.rmap)
        inv.update(t.inv)
        comp.update(t.comp)
    return GroupoidTable(
        name or "+".join(t.name for t in tables),
        tuple(elements),
        frozenset().union(*(t.objects for t in tables)),
        dmap, rmap, inv, comp,
    )


# Functors -------------------------------------------------------------------


@dataclass(frozen=True)
class GroupoidFunctor:
    """An element map between two groupoid tables; functoriality is checked separately."""

    source: GroupoidTable
    target: GroupoidTable
    mapping: Mapping[str, str] = field(hash=False)
    name: str = "F"

    def __post_init__(self) -> None:
        missing = [g for g in self.source.elements if g not in self.mapping]
        if missing:
            raise FormatError(f"functor {self.name} is not total: undefined on {missing}")
        outside = sorted({v for v in self.mapping.values() if v not in self.target})
        if outside:
            raise FormatError(f"functor {self.name} has values outside {self.target.name}: {outside}")

    def __call__(self, g: str) -> str:
        return self.mapping[g]

    @cached_property
    def image(self) -> frozenset:
        return frozenset(self.mapping[g] for g in self.source.elements)


def verify_functor(F: GroupoidFunctor) -> ValidationReport:
    """
    Check that an element map is a functor.

    Tags: objects, domain, range, inverse, composition.
    """
    s, t = F.source, F.target
    report = ValidationReport(subject=f"functor {F.name}: {s.name} -> {t.name}")
    for g in s.elements:
        image = F(g)
        if s.is_object(g) and not t.is_object(image):
            report.add("objects", (g,), f"object {g} maps to non-object {image}")
        if t.d(image) != F(s.d(g)):
            report.add("domain", (g,), f"d(F({g})) = {t.d(image)} != F(d({g})) = {F(s.d(g))}")
        if t.r(image) != F(s.r(g)):
            report.add("range", (g,), f"r(F({g})) = {t.r(image)} != F(r({g})) = {F(s.r(g))}")
        if t.inverse(image) != F(s.inverse(g)):
            report.add("inverse", (g,), f"F({g})^-1 = {t.inverse(image)} != F({g}^-1)")
    for g, h in s.composable_pairs:
        gh = s.compose(g, h)
        if gh is None:
            continue
        image = t.compose(F(g), F(h))
        if image != F(gh):
            report.add("composition", (g, h),
                       f"F({g}∘{h}) = {F(gh)} but F({g})∘F({h}) = {image}")
    return report


def is_functorial(F: GroupoidFunctor) -> bool:
    return verify_functor(F).passed


def is_injective(F: GroupoidFunctor) -> bool:
    return len(F.image) == len(F.source)


def is_bijective(F: GroupoidFunctor) -> bool:
    return is_injective(F) and len(F.image) == len(F.target)


def is_isomorphism(F: GroupoidFunctor) -> bool:
    """A bijective functor between groupoids is an isomorphism."""
    return is_bijective(F) and is_functorial(F)


def require_isomorphism(F: GroupoidFunctor) -> None:
    """
    Raise unless F is a bijective functor.

    Raises:
        NotFunctorialError: If F fails functoriality or bijectivity
    """
    verify_functor(F).raise_if_failed(NotFunctorialError)
    if not is_bijective(F):
        message = f"functor {F.name} is not bijective ({len(F.image)} of {len(F.target)} hit)"
        logger.warning(message)
        raise NotFunctorialError(message)


def inverse_functor(F: GroupoidFunctor) -> GroupoidFunctor:
    """Inverse of a bijective element map."""
    if not is_bijective(F):
        raise NotFunctorialError(f"functor {F.name} is not bijective")
    return GroupoidFunctor(F.target, F.source, {v: k for k, v in F.mapping.items()},
                           name=f"{F.name}^-1")


def compose_functors(G: GroupoidFunctor, F: GroupoidFunctor) -> GroupoidFunctor:
    """G∘F."""
    if F.target is not G.source and F.target.elements != G.source.elements:
        raise FormatError(f"cannot compose {G.name} after {F.name}: tables differ")
    return GroupoidFunctor(F.source, G.target, {g: G(F(g)) for g in F.source.elements},
                           name=f"{G.name}∘{F.name}")


def identity_functor(t: GroupoidTable) -> GroupoidFunctor:
    return GroupoidFunctor(t, t, {g: g for g in t.elements}, name=f"id_{t.name}")


def iter_isomorphisms(src: GroupoidTable, tgt: GroupoidTable) -> Iterator[Dict[str, str]]:
    """
    Enumerate all isomorphisms src -> tgt by backtracking.

    Objects are assigned first; each arrow is assigned together with its
    inverse and checked against every product whose factors are already mapped.

    Yields:
        dict: Element mapping of one isomorphism
    """
    if len(src) != len(tgt) or len(src.objects) != len(tgt.objects):
        return

    order = src.object_list + [g for g in src.elements if not src.is_object(g)]
    involved: Dict[str, List[Tuple[str, str, str]]] = {g: [] for g in src.elements}
    for (g, h), k in src.comp.items():
        for x in {g, h, k}:
            involved[x].append((g, h, k))

    mapping: Dict[str, str] = {}
    used: set = set()

    def consistent(new: Iterable[str]) -> bool:
        for x in new:
            for g, h, k in involved[x]:
                if g in mapping and h in mapping and k in mapping:
                    if tgt.compose(mapping[g], mapping[h]) != mapping[k]:
                        return False
        return True

    def extend(i: int) -> Iterator[Dict[str, str]]:
        if i == len(order):
            yield dict(mapping)
            return
        g = order[i]
        if g in mapping:
            yield from extend(i + 1)
            return
        if src.is_object(g):
            candidates = [c for c in tgt.object_list if c not in used]
        else:
            candidates = [
                c for c in tgt.hom(mapping[src.d(g)], mapping[src.r(g)])
                if c not in used and not tgt.is_object(c)
            ]
        g_inv = src.inverse(g)
        for c in candidates:
            c_inv = tgt.inverse(c)
            if (g_inv == g) != (c_inv == c):
                continue
            if g_inv != g and c_inv in used:
                continue
            new = {g: c, g_inv: c_inv}
            mapping.update(new)
            used.update(new.values())
            if consistent(new):
                yield from extend(i + 1)
            for key in new:
                mapping.pop(key, None)
            used.difference_update(new.values())

    yield from extend(0)


def find_isomorphism(src: GroupoidTable, tgt: GroupoidTable) -> Optional[GroupoidFunctor]:
    """First isomorphism src -> tgt found by iter_isomorphisms, or None."""
    for mapping in iter_isomorphisms(src, tgt):
        return GroupoidFunctor(src, tgt, mapping, name=f"{src.name}≅{tgt.name}")
    return None


def build_connected_iso(t: GroupoidTable, e: str) -> GroupoidFunctor:
    """
    Isomorphism of a connected groupoid onto pair(G₀) × G_e.

    The transversal τ_x : e -> x is the first element in declared order linking
    e to x (τ_e = e). An element g : s -> t maps to ((s|t) | τ_t⁻¹∘g∘τ_s).

    Args:
        t: Connected valid groupoid
        e: Base object

    Returns:
        GroupoidFunctor: Verified isomorphism

    Raises:
        FormatError: If e is not an object
        AxiomError: If t is not connected
    """
    from .prod import direct_product

    group_members = isotropy_group(t, e)
    if not is_connected(t):
        message = f"{t.name} is not connected; no isomorphism onto pair(G0) x G_{e}"
        logger.error(message)
        raise AxiomError(message)

    transversal = {
        x: e if x == e else t.hom(e, x)[0]
        for x in t.object_list
    }
    pair = pair_groupoid(t.object_list, name=f"pair({t.name}0)")
    group = restrict(t, group_members, name=f"{t.name}_{e}")
    target = direct_product([pair, group])

    mapping = {}
    for g in t.elements:
        s, u = t.d(g), t.r(g)
        core_part = compose_chain(t, [t.inverse(transversal[u]), g, transversal[s]])
        if core_part is None:
            raise AxiomError(f"{t.name}: transversal product for {g} undefined; validate first")
        mapping[g] = pack(pack(s, u), core_part)

    F = GroupoidFunctor(t, target, mapping, name=f"iso_{t.name}")
    require_isomorphism(F)
    logger.success(f"Verified {t.name} ≅ pair(G0) x G_{e} ({len(t)} elements)")
    return F
