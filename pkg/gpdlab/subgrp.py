"""
Subgroupoids, normality, subset products and internal direct products.

Subsets of a parent table are passed around as plain element sets; all
checks read the parent's composition table directly.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from .config import get_settings
from .core import (
    GroupoidFunctor,
    GroupoidTable,
    ValidationReport,
    compose_chain,
    iso_subgroupoid,
    is_injective,
    pack,
    restrict,
    verify_functor,
)
from .errors import AxiomError, EmbeddingError, FormatError


@dataclass(frozen=True)
class SubgroupoidRef:
    """A subset of a parent table that is meant to be a subgroupoid."""

    parent: GroupoidTable
    members: FrozenSet[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", _members(self.parent, self.members))

    def is_valid(self) -> bool:
        return is_subgroupoid(self.parent, self.members)

    def table(self, name: Optional[str] = None) -> GroupoidTable:
        """The subgroupoid as a standalone table."""
        return restrict(self.parent, self.members, name=name)


def _members(parent: GroupoidTable, s: Iterable[str]) -> FrozenSet[str]:
    members = frozenset(s)
    if not members:
        raise FormatError(f"{parent.name}: empty element set")
    parent.require(members)
    return members


def is_subgroupoid(parent: GroupoidTable, s: Iterable[str]) -> bool:
    """
    True iff s is closed under inverse and under every defined product.

    Raises:
        FormatError: If s is empty or contains unknown ids
    """
    members = _members(parent, s)
    if any(parent.inverse(g) not in members for g in members):
        return False
    for g in members:
        for h in parent.by_range[parent.d(g)]:
            if h in members and parent.compose(g, h) not in members:
                return False
    return True


def _require_subgroupoid(parent: GroupoidTable, s: Iterable[str]) -> FrozenSet[str]:
    members = _members(parent, s)
    if not is_subgroupoid(parent, members):
        message = f"{parent.name}: {{{', '.join(parent.sort(members))}}} is not a subgroupoid"
        logger.warning(message)
        raise AxiomError(message, witnesses=parent.sort(members))
    return members


def is_wide(parent: GroupoidTable, s: Iterable[str]) -> bool:
    """
    True iff the subgroupoid s contains every object of the parent.

    Raises:
        AxiomError: If s is not a subgroupoid
    """
    members = _require_subgroupoid(parent, s)
    return parent.objects <= members


def is_subgroup(parent: GroupoidTable, s: Iterable[str]) -> bool:
    """A subgroupoid lying inside a single isotropy group."""
    members = _members(parent, s)
    if not is_subgroupoid(parent, members):
        return False
    return len({parent.d(g) for g in members} | {parent.r(g) for g in members}) == 1


def conjugate_set(parent: GroupoidTable, s: Iterable[str], g: str) -> FrozenSet[str]:
    """
    g⁻¹Hg = {g⁻¹hg : h ∈ H, r(h) = d(h) = r(g)}.

    Args:
        parent: Groupoid table
        s: Element set H
        g: Conjugating element

    Returns:
        frozenset: The conjugate set (inside the isotropy group at d(g))
    """
    members = frozenset(s)
    parent.require(members)
    parent.require((g,))
    apex = parent.r(g)
    g_inv = parent.inverse(g)
    result = set()
    for h in members:
        if parent.d(h) == apex and parent.r(h) == apex:
            conjugate = compose_chain(parent, [g_inv, h, g])
            if conjugate is None:
                raise AxiomError(f"{parent.name}: {g_inv}∘{h}∘{g} undefined; validate the table")
            result.add(conjugate)
    return frozenset(result)


def is_normal(parent: GroupoidTable, s: Iterable[str]) -> bool:
    """True iff s is a wide subgroupoid with g⁻¹Hg ⊆ H for every g."""
    members = _members(parent, s)
    if not is_subgroupoid(parent, members) or not parent.objects <= members:
        return False
    return _first_non_normal(parent, members) is None


def _first_non_normal(parent: GroupoidTable, members: FrozenSet[str]) -> Optional[Tuple[str, str]]:
    for g in parent.elements:
        outside = conjugate_set(parent, members, g) - members
        if outside:
            return g, parent.sort(outside)[0]
    return None


def is_normal_bw(parent: GroupoidTable, s: Iterable[str]) -> bool:
    """
    Normality in the Brandt-Westman form: g⁻¹H_{r(g)}g = H_{d(g)} for every g.

    Raises:
        AxiomError: If s is not a wide subgroupoid
    """
    members = _members(parent, s)
    if not is_wide(parent, members):
        raise AxiomError(f"{parent.name}: subgroupoid is not wide", witnesses=parent.sort(members))

    local: Dict[str, FrozenSet[str]] = {
        e: frozenset(h for h in members if parent.d(h) == e and parent.r(h) == e)
        for e in parent.object_list
    }
    return all(
        conjugate_set(parent, local[parent.r(g)], g) == local[parent.d(g)]
        for g in parent.elements
    )


def restricted_tuples(parent: GroupoidTable, sets: Sequence[Iterable[str]]) -> List[Tuple[str, ...]]:
    """
    (X₁ × ... × Xₙ)^(n): tuples (x₁, ..., xₙ) whose chain product exists.

    A chain composes iff d(xᵢ) = r(xᵢ₊₁) for every i.

    Returns:
        list: Tuples in lexicographic declared order
    """
    if not sets:
        raise FormatError("restricted tuples need at least one set")
    ordered = []
    for s in sets:
        members = frozenset(s)
        parent.require(members)
        ordered.append(parent.sort(members))

    tuples: List[Tuple[str, ...]] = [(x,) for x in ordered[0]]
    for layer in ordered[1:]:
        tuples = [
            prefix + (x,)
            for prefix in tuples
            for x in layer
            if parent.d(prefix[-1]) == parent.r(x)
        ]
    return tuples


def product_set(parent: GroupoidTable, sets: Sequence[Iterable[str]]) -> FrozenSet[str]:
    """X₁⋯Xₙ: products of all composable chains, one factor from each set."""
    if not sets:
        raise FormatError("product of an empty family of sets")
    current = frozenset(sets[0])
    parent.require(current)
    for s in sets[1:]:
        layer = frozenset(s)
        parent.require(layer)
        current = frozenset(
            k
            for p in current
            for x in layer
            if parent.d(p) == parent.r(x)
            for k in (parent.compose(p, x),)
            if k is not None
        )
    return current


def generated_subgroupoid(parent: GroupoidTable, gens: Iterable[str]) -> FrozenSet[str]:
    """Smallest subgroupoid containing the generators."""
    members: Set[str] = set()
    frontier = set(gens)
    parent.require(frontier)
    for g in list(frontier):
        frontier.update((parent.inverse(g), parent.d(g), parent.r(g)))
    while frontier:
        members |= frontier
        new: Set[str] = set()
        for g in members:
            for h in parent.by_range[parent.d(g)]:
                if h in members:
                    k = parent.compose(g, h)
                    if k is not None and k not in members:
                        new.add(k)
                        new.add(parent.inverse(k))
        frontier = new
    return frozenset(members)


def wide_subgroupoids(parent: GroupoidTable) -> List[FrozenSet[str]]:
    """
    Every wide subgroupoid of a small table.

    Returns:
        list: Member sets ordered by size, then declared order

    Raises:
        AxiomError: If the parent exceeds subgroupoid_enum_max elements
    """
    limit = get_settings().subgroupoid_enum_max
    if len(parent) > limit:
        raise AxiomError(
            f"{parent.name} has {len(parent)} elements; wide subgroupoid enumeration "
            f"is limited to {limit}"
        )

    start = generated_subgroupoid(parent, parent.objects)
    found = {start}
    queue = [start]
    while queue:
        current = queue.pop()
        for g in parent.elements:
            if g in current:
                continue
            bigger = generated_subgroupoid(parent, current | {g})
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)

    logger.debug(f"{parent.name}: {len(found)} wide subgroupoids")
    return sorted(found, key=lambda s: (len(s), [parent.index[g] for g in parent.sort(s)]))


def preimage(F: GroupoidFunctor, members: Iterable[str]) -> FrozenSet[str]:
    """F⁻¹(K) for a set K of target elements."""
    keep = frozenset(members)
    F.target.require(keep)
    return frozenset(g for g in F.source.elements if F(g) in keep)


# Products of subgroupoids ----------------------------------------------------


class TupleSubgroupoidReport(BaseModel):
    """Outcome of the restricted-tuple subgroupoid test."""

    direct: bool = Field(description="Restricted tuples closed in the n-fold direct product")
    criterion: bool = Field(description="r(h_i) = d(h_(i+1)) on every restricted tuple")
    iso_criterion: Optional[bool] = Field(
        default=None, description="Every H_i equals Iso(H_i); only for n >= 2 wide inputs"
    )
    tuple_count: int = 0
    report: ValidationReport = Field(default_factory=ValidationReport)

    @property
    def agree(self) -> bool:
        return self.direct == self.criterion and self.iso_criterion in (None, self.direct)


def tuples_subgroupoid_check(parent: GroupoidTable,
                             subgroupoids: Sequence[Iterable[str]]) -> TupleSubgroupoidReport:
    """
    Decide whether the restricted tuples of subgroupoids form a subgroupoid
    of the n-fold direct product, both directly and by the r(hᵢ) = d(hᵢ₊₁)
    criterion.

    Raises:
        AxiomError: If an input is not a subgroupoid
    """
    subs = [_require_subgroupoid(parent, s) for s in subgroupoids]
    tuples = restricted_tuples(parent, subs)
    tuple_set = set(tuples)
    report = ValidationReport(subject=f"restricted tuples of {len(subs)} subgroupoids of {parent.name}")

    direct = True
    for t in tuples:
        inverse = tuple(parent.inverse(h) for h in t)
        if inverse not in tuple_set:
            direct = False
            report.add("inverse-closure", t, f"componentwise inverse {pack(*inverse)} is not a restricted tuple")
    for t1 in tuples:
        for t2 in tuples:
            if all(parent.d(a) == parent.r(b) for a, b in zip(t1, t2)):
                composite = tuple(parent.compose(a, b) for a, b in zip(t1, t2))
                if composite not in tuple_set:
                    direct = False
                    report.add("product-closure", t1 + t2,
                               f"{pack(*t1)}{pack(*t2)} leaves the restricted tuples")

    criterion = True
    for t in tuples:
        for i in range(len(t) - 1):
            if parent.r(t[i]) != parent.d(t[i + 1]):
                criterion = False
                report.add("range-domain", t, f"r({t[i]}) != d({t[i + 1]})")
                break

    iso_criterion = None
    if len(subs) >= 2 and all(parent.objects <= s for s in subs):
        iso = iso_subgroupoid(parent)
        iso_criterion = all(s <= iso for s in subs)

    result = TupleSubgroupoidReport(
        direct=direct,
        criterion=criterion,
        iso_criterion=iso_criterion,
        tuple_count=len(tuples),
        report=report,
    )
    if not result.agree:
        logger.error(f"{parent.name}: restricted-tuple tests disagree ({direct}, {criterion}, {iso_criterion})")
    return result


class InternalDirectReport(BaseModel):
    """The five conditions characterizing an internal direct product."""

    product: bool = Field(description="(i) G = H1...Hn")
    normal: bool = Field(description="(ii) every Hi is normal")
    trivial_intersection: bool = Field(description="(iii) Hi meets the product of the others in G0")
    unique_factorization: bool = Field(description="(iv) every g has exactly one composable factorization")
    commuting: bool = Field(description="(v) elements of distinct Hi in a common isotropy group commute")
    report: ValidationReport = Field(default_factory=ValidationReport)

    @property
    def left(self) -> bool:
        return self.product and self.normal and self.trivial_intersection

    @property
    def right(self) -> bool:
        return self.unique_factorization and self.commuting

    @property
    def all_true(self) -> bool:
        return self.left and self.right

    def first_failure(self) -> Optional[str]:
        for label, flag in (
            ("(i) product", self.product),
            ("(ii) normality", self.normal),
            ("(iii) intersection", self.trivial_intersection),
            ("(iv) unique factorization", self.unique_factorization),
            ("(v) commutation", self.commuting),
        ):
            if not flag:
                return label
        return None


def _factorizations(parent: GroupoidTable, subs: Sequence[FrozenSet[str]]) -> Dict[str, List[Tuple[str, ...]]]:
    factors: Dict[str, List[Tuple[str, ...]]] = {g: [] for g in parent.elements}
    for t in restricted_tuples(parent, subs):
        product_ = compose_chain(parent, t)
        if product_ is not None:
            factors[product_].append(t)
    return factors


def internal_direct_report(parent: GroupoidTable,
                           subgroupoids: Sequence[Iterable[str]]) -> InternalDirectReport:
    """
    Evaluate all five internal-direct-product conditions independently.

    Args:
        parent: Valid groupoid table
        subgroupoids: Wide subgroupoids H1, ..., Hn

    Returns:
        InternalDirectReport: One flag per condition plus first witnesses

    Raises:
        AxiomError: If an input is not a wide subgroupoid
    """
    subs = [_require_subgroupoid(parent, s) for s in subgroupoids]
    if not subs:
        raise FormatError("internal direct report needs at least one subgroupoid")
    for i, s in enumerate(subs):
        if not parent.objects <= s:
            missing = parent.sort(parent.objects - s)
            raise AxiomError(f"{parent.name}: subgroupoid H{i + 1} is not wide (misses {missing[0]})",
                             witnesses=missing)

    report = ValidationReport(subject=f"internal direct product in {parent.name}")

    whole = product_set(parent, subs)
    missing = [g for g in parent.elements if g not in whole]
    if missing:
        report.add("(i)", (missing[0],), f"{missing[0]} is not a product h1...hn")

    normal = True
    for i, s in enumerate(subs):
        bad = _first_non_normal(parent, s)
        if bad is not None:
            normal = False
            report.add("(ii)", (f"H{i + 1}",) + bad, f"conjugating by {bad[0]} gives {bad[1]} outside H{i + 1}")

    intersection_ok = True
    for i, s in enumerate(subs):
        others = subs[:i] + subs[i + 1:]
        rest = product_set(parent, others) if others else parent.objects
        extra = (s & rest) - parent.objects
        if extra or not parent.objects <= (s & rest):
            intersection_ok = False
            witness = parent.sort(extra)[0] if extra else parent.sort(parent.objects - rest)[0]
            report.add("(iii)", (f"H{i + 1}", witness), f"H{i + 1} meets the other factors in {witness}")

    unique = True
    for g, found in _factorizations(parent, subs).items():
        if len(found) != 1:
            unique = False
            detail = "no factorization" if not found else f"{len(found)} factorizations"
            report.add("(iv)", (g,), f"{g} has {detail}")

    commuting = True
    for i, si in enumerate(subs):
        for j, sj in enumerate(subs):
            if i == j:
                continue
            for x in parent.sort(si):
                if parent.d(x) != parent.r(x):
                    continue
                for y in parent.sort(sj):
                    if parent.d(y) == parent.r(y) == parent.d(x):
                        if parent.compose(x, y) != parent.compose(y, x):
                            commuting = False
                            report.add("(v)", (x, y), f"{x}∘{y} != {y}∘{x}")

    result = InternalDirectReport(
        product=not missing,
        normal=normal,
        trivial_intersection=intersection_ok,
        unique_factorization=unique,
        commuting=commuting,
        report=report,
    )
    logger.debug(
        f"{parent.name}: internal direct conditions "
        f"{[result.product, result.normal, result.trivial_intersection, result.unique_factorization, result.commuting]}"
    )
    return result


def embed_direct(parent: GroupoidTable, subgroupoids: Sequence[Iterable[str]]) -> GroupoidFunctor:
    """
    Embed G = H1⋯Hn into the n-fold direct product by h1⋯hn ↦ (h1, ..., hn).

    Args:
        parent: Valid groupoid table
        subgroupoids: Wide subgroupoids satisfying all five conditions

    Returns:
        GroupoidFunctor: Verified injective functor; its image is exactly the
            restricted tuples of the inputs

    Raises:
        EmbeddingError: Naming the first failed condition, or a failed check
    """
    from .prod import direct_product

    subs = [frozenset(s) for s in subgroupoids]
    conditions = internal_direct_report(parent, subs)
    failure = conditions.first_failure()
    if failure is not None:
        message = f"{parent.name}: cannot embed, condition {failure} fails"
        logger.error(message)
        raise EmbeddingError(message, report=conditions.report)

    target = direct_product([parent] * len(subs), name=f"{parent.name}^{len(subs)}")
    mapping = {g: pack(*found[0]) for g, found in _factorizations(parent, subs).items()}
    F = GroupoidFunctor(parent, target, mapping, name="embed")

    verify_functor(F).raise_if_failed(EmbeddingError)
    if not is_injective(F):
        raise EmbeddingError(f"{parent.name}: embedding is not injective")
    image = {pack(*t) for t in restricted_tuples(parent, subs)}
    if set(F.image) != image:
        raise EmbeddingError(f"{parent.name}: embedding image differs from the restricted tuples")

    logger.success(f"Embedded {parent.name} into {target.name} ({len(subs)} factors)")
    return F
