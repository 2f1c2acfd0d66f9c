"""
Universal globalization of strict partial actions.

Y is the set of pairs (g, x) with d(g) = e_x modulo
(g, x) ~ (h, y) iff r(g) = r(h) and (h⁻¹g)·x = y, and the global action
on Y is g'·[g, x] = [g'g, x]. Every property the construction should have is
re-checked after it is built; a failure is an InvariantError.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from .catequiv import projection_functor
from .config import get_settings
from .core import GroupoidFunctor, ValidationReport, is_functorial, is_injective, pack
from .errors import AxiomError, InvariantError, UniversalityError
from .pact import (
    PartialActionTable,
    Point,
    action_groupoid,
    disjoint_union_actions,
    is_action_morphism,
    is_global,
    require_strict,
    validate_partial_action,
)

Rep = Tuple[str, Point]


def class_id(g: str, x: Point) -> str:
    return "[" + g + "|" + x + "]"


@dataclass(frozen=True)
class Globalization:
    """A global action β on Y with the morphism ι from the base action."""

    base: PartialActionTable
    carrier: Tuple[str, ...]
    beta: PartialActionTable
    iota: Mapping[Point, str] = field(hash=False)
    classes: Mapping[str, Tuple[Rep, ...]] = field(hash=False)

    def class_of(self, g: str, x: Point) -> str:
        """Class id of the pair (g, x); KeyError if d(g) is not the identity at x."""
        for cid, reps in self.classes.items():
            if (g, x) in reps:
                return cid
        raise KeyError((g, x))


def _related(p: PartialActionTable, a: Rep, b: Rep) -> bool:
    t = p.groupoid
    (g, x), (h, y) = a, b
    if t.r(g) != t.r(h):
        return False
    k = t.compose(t.inverse(h), g)
    return k is not None and p.apply(k, x) == y


def globalize(p: PartialActionTable, name: Optional[str] = None) -> Globalization:
    """
    Build the universal globalization of a strict partial action.

    Args:
        p: Strict valid partial action
        name: Name of the global action β

    Returns:
        Globalization: Class ids are [g|x] for the least representative

    Raises:
        StrictnessError: If p is not strict
        InvariantError: If ~ is not an equivalence or a built property fails
    """
    index = require_strict(p)
    t = p.groupoid
    pairs: List[Rep] = [
        (g, x) for g in t.elements for x in p.carrier if t.d(g) == index[x]
    ]
    logger.debug(f"Globalizing {p.name}: {len(pairs)} pairs")

    representatives: List[Rep] = []
    members: Dict[Rep, List[Rep]] = {}
    for pair in pairs:
        for rep in representatives:
            if _related(p, rep, pair):
                members[rep].append(pair)
                break
        else:
            representatives.append(pair)
            members[pair] = [pair]

    for rep in representatives:
        block = members[rep]
        for a in block:
            for b in block:
                if not _related(p, a, b):
                    raise InvariantError(f"relation on pairs of {p.name} is not an equivalence at {a}, {b}")
    for i, rep in enumerate(representatives):
        for other in representatives[i + 1:]:
            if _related(p, other, rep) or _related(p, rep, other):
                raise InvariantError(f"classes of {rep} and {other} overlap")

    classes = {class_id(*rep): tuple(members[rep]) for rep in representatives}
    pair_class = {pair: class_id(*rep) for rep in representatives for pair in members[rep]}

    act: Dict[Tuple[str, str], str] = {}
    for rep in representatives:
        cid = class_id(*rep)
        for g2 in t.by_domain[t.r(rep[0])]:
            images = {pair_class[(t.compose(g2, g), x)] for g, x in members[rep]}
            if len(images) != 1:
                raise InvariantError(f"action of {g2} on class {cid} is not well defined")
            act[(g2, cid)] = images.pop()

    carrier = tuple(classes)
    beta = PartialActionTable(name or f"beta({p.name})", t, carrier, act)
    iota = {x: pair_class[(index[x], x)] for x in p.carrier}

    if not validate_partial_action(beta).passed or not is_global(beta):
        raise InvariantError(f"globalization of {p.name} is not a global action")
    if len(set(iota.values())) != len(iota) or not is_action_morphism(iota, p, beta):
        raise InvariantError(f"iota for {p.name} is not an injective morphism")

    logger.success(f"Globalized {p.name}: |X|={len(p.carrier)} -> |Y|={len(carrier)}")
    return Globalization(p, carrier, beta, iota, classes)


def with_extra_orbit(gl: Globalization, extra: PartialActionTable) -> Globalization:
    """
    A globalization with a disjoint extra global action added to β; ι is unchanged.

    Used to build alternative (non-universal) globalizations. Points of the
    extra orbit are not g·ι(x) for any pair, so their classes are empty.
    """
    beta = disjoint_union_actions(gl.beta, extra, name=f"{gl.beta.name}+{extra.name}")
    classes: Dict[str, Tuple[Rep, ...]] = dict(gl.classes)
    classes.update((y, ()) for y in extra.carrier)
    return Globalization(gl.base, beta.carrier, beta, dict(gl.iota), classes)


def nu_embedding(gl: Globalization) -> GroupoidFunctor:
    """
    ν: (G, X) → (G, Y), (g|x) ↦ (g|ι(x)), verified injective with Π∘ν = Γ.

    Raises:
        InvariantError: If ν fails verification
    """
    p = gl.base
    source = action_groupoid(p)
    target = action_groupoid(gl.beta)
    mapping = {pack(g, x): pack(g, gl.iota[x]) for g, x in p.domain}
    nu = GroupoidFunctor(source, target, mapping, name="nu")
    if not is_functorial(nu) or not is_injective(nu):
        raise InvariantError(f"nu for {p.name} is not an injective functor")

    gamma, pi = projection_functor(p), projection_functor(gl.beta)
    if any(pi(nu(a)) != gamma(a) for a in source.elements):
        raise InvariantError(f"Pi∘nu != Gamma for {p.name}")
    return nu


class FullDenseReport(BaseModel):
    full: bool
    dense: bool
    report: ValidationReport = Field(default_factory=ValidationReport)

    @property
    def passed(self) -> bool:
        return self.full and self.dense


def check_full_dense(gl: Globalization) -> FullDenseReport:
    """
    Whether ν((G, X)) is full and dense in (G, Y).

    Full: every element of (G, Y) between identities in the image lies in the
    image. Dense: every identity of (G, Y) is isomorphic to an identity in the
    image.

    Returns:
        FullDenseReport: Both flags with witnesses
    """
    nu = nu_embedding(gl)
    big = nu.target
    image = nu.image
    image_objects = {e for e in image if big.is_object(e)}
    report = ValidationReport(subject=f"image of nu in (G,{gl.beta.name})")

    full = True
    for c in big.elements:
        if big.d(c) in image_objects and big.r(c) in image_objects and c not in image:
            full = False
            report.add("full", (c,), f"{c} joins image identities but is not in the image")

    dense = True
    for o in big.object_list:
        if not any(big.r(c) in image_objects for c in big.by_domain[o]):
            dense = False
            report.add("dense", (o,), f"identity {o} is not isomorphic to an identity in the image")

    logger.debug(f"Full/dense for {gl.beta.name}: full={full}, dense={dense}")
    return FullDenseReport(full=full, dense=dense, report=report)


def _mediating_candidate(gl: Globalization, q: PartialActionTable,
                         j: Mapping[Point, Point]) -> Dict[str, Point]:
    k: Dict[str, Point] = {}
    for cid, reps in gl.classes.items():
        if not reps:
            raise UniversalityError(
                f"point {cid} of {gl.beta.name} is not g·ι(x) for any pair", witnesses=(cid,)
            )
        values = set()
        for g, x in reps:
            value = q.apply(g, j[x])
            if value is None:
                message = f"no mediating morphism: {g}·j({x}) = {g}·{j[x]} is undefined in {q.name}"
                logger.warning(message)
                raise UniversalityError(message, witnesses=(cid,))
            values.add(value)
        if len(values) != 1:
            raise UniversalityError(f"candidate mediating map is ill-defined on class {cid}",
                                    witnesses=(cid,))
        k[cid] = values.pop()
    return k


def mediating_morphism_search(gl: Globalization, q: PartialActionTable,
                              j: Mapping[Point, Point]) -> List[Dict[str, Point]]:
    """
    Every morphism k: β → q with j = k∘ι, by backtracking over point maps.

    The search visits at most brute_force_map_limit partial assignments.

    Raises:
        UniversalityError: If the limit is reached before the search ends
    """
    limit = get_settings().brute_force_map_limit
    beta = gl.beta
    fixed = {gl.iota[x]: j[x] for x in gl.base.carrier}
    order = list(beta.carrier)
    k: Dict[str, Point] = {}
    found: List[Dict[str, Point]] = []
    visited = 0

    def consistent(y: str) -> bool:
        for g in beta.acting[y]:
            image = q.apply(g, k[y])
            if image is None:
                return False
            target = beta.act[(g, y)]
            if target in k and k[target] != image:
                return False
            source = beta.apply(beta.groupoid.inverse(g), y)
            if source is not None and source in k and q.apply(g, k[source]) != k[y]:
                return False
        return True

    def extend(i: int) -> Iterator[None]:
        nonlocal visited
        if i == len(order):
            found.append(dict(k))
            yield None
            return
        y = order[i]
        candidates = [fixed[y]] if y in fixed else list(q.carrier)
        for z in candidates:
            visited += 1
            if visited > limit:
                message = f"mediating morphism search into {q.name} exceeded {limit} nodes"
                logger.warning(message)
                raise UniversalityError(message)
            k[y] = z
            if consistent(y):
                yield from extend(i + 1)
            del k[y]

    for _ in extend(0):
        pass
    return found


def verify_universal(gl: Globalization, q: PartialActionTable, j: Mapping[Point, Point],
                     exhaustive: bool = False) -> Dict[str, Point]:
    """
    Find the mediating morphism k: β → q with j = k∘ι.

    k[g, x] is forced to be g·j(x); it is checked to be well defined on classes
    and a morphism. With ``exhaustive`` all point maps are also searched and
    exactly one morphism must be found.

    Args:
        gl: Globalization of the base action
        q: Global action of the same groupoid
        j: Morphism from the base action to q

    Returns:
        dict: The unique mediating morphism

    Raises:
        AxiomError: If j is not a morphism
        UniversalityError: If no mediating morphism exists or it is not unique
    """
    if q.groupoid.elements != gl.base.groupoid.elements:
        raise AxiomError(f"{q.name} is an action of a different groupoid")
    if not is_action_morphism(j, gl.base, q):
        raise AxiomError(f"j is not a morphism {gl.base.name} -> {q.name}")
    if not is_global(q):
        logger.warning(f"{q.name} is not global; a mediating morphism may not exist")

    k = _mediating_candidate(gl, q, j)
    if not is_action_morphism(k, gl.beta, q):
        raise UniversalityError(f"candidate mediating map is not a morphism {gl.beta.name} -> {q.name}")
    if any(k[gl.iota[x]] != j[x] for x in gl.base.carrier):
        raise UniversalityError(f"j != k∘iota for {q.name}")

    if exhaustive:
        found = mediating_morphism_search(gl, q, j)
        if found != [k]:
            raise UniversalityError(
                f"exhaustive search found {len(found)} mediating morphisms into {q.name}"
            )
    logger.debug(f"Mediating morphism {gl.beta.name} -> {q.name} verified")
    return k
