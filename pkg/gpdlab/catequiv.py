"""
Star-injective functors and strict partial actions.

A strict partial action p gives the star-injective projection out of its
action groupoid; a star-injective functor Γ: H → G gives a strict partial
action of G on H₀. The natural isomorphisms τ and η relating the two round
trips are materialized as plain maps and checked pointwise.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple, Union

from loguru import logger
from pydantic import BaseModel

from .core import (
    GroupoidFunctor,
    GroupoidTable,
    ValidationReport,
    compose_functors,
    is_bijective,
    pack,
    verify_functor,
)
from .errors import AxiomError, InvariantError, NotFunctorialError, StrictnessError
from .pact import (
    PartialActionTable,
    Point,
    action_groupoid,
    identity_sets,
    is_action_isomorphism,
    is_action_morphism,
    is_global,
    require_partial_action,
    require_strict,
)


class FunctorClass(BaseModel):
    """Star classification of a functor."""

    star_injective: bool
    star_surjective: bool

    @property
    def covering(self) -> bool:
        return self.star_injective and self.star_surjective


def classify_functor(F: GroupoidFunctor) -> FunctorClass:
    """
    Decide star injectivity and star surjectivity.

    Raises:
        NotFunctorialError: If F is not a functor
    """
    verify_functor(F).raise_if_failed(NotFunctorialError)
    s, t = F.source, F.target

    injective = True
    for e in s.object_list:
        images = [F(g) for g in s.by_domain[e]]
        if len(set(images)) != len(images):
            injective = False
            break

    surjective = True
    for e in s.object_list:
        hit = {F(g) for g in s.by_domain[e]}
        if any(g not in hit for g in t.by_domain[F(e)]):
            surjective = False
            break

    result = FunctorClass(star_injective=injective, star_surjective=surjective)
    logger.debug(f"Functor {F.name}: star-injective={injective}, star-surjective={surjective}")
    return result


def require_star_injective(F: GroupoidFunctor) -> None:
    if not classify_functor(F).star_injective:
        message = f"functor {F.name} is not star-injective"
        logger.warning(message)
        raise AxiomError(message)


def projection_functor(p: PartialActionTable) -> GroupoidFunctor:
    """Γ: (G, X) → G, (g|x) ↦ g."""
    source = action_groupoid(p)
    mapping = {pack(g, x): g for g, x in p.domain}
    return GroupoidFunctor(source, p.groupoid, mapping, name=f"Gamma^{p.name}")


def induced_partial_action(F: GroupoidFunctor, name: Optional[str] = None) -> PartialActionTable:
    """
    The partial action of G on H₀ given by a star-injective Γ: H → G:
    g·x is defined iff some h has d(h) = x and Γ(h) = g, and then g·x = r(h).

    Raises:
        AxiomError: If F is not star-injective
    """
    require_star_injective(F)
    s = F.source
    act = {(F(h), s.d(h)): s.r(h) for h in s.elements}
    p = PartialActionTable(name or f"alpha^{F.name}", F.target, tuple(s.object_list), act)
    logger.debug(f"Induced partial action {p.name}: |X|={len(p.carrier)}, |D|={len(act)}")
    return p


def tau(p: PartialActionTable) -> Dict[Point, str]:
    """
    τ_α: x ↦ (e_x|x), verified to be an isomorphism from p onto the action
    induced by its projection functor.

    Raises:
        StrictnessError: If p is not strict
        InvariantError: If the verification fails
    """
    index = require_strict(p)
    mapping = {x: pack(index[x], x) for x in p.carrier}
    q = induced_partial_action(projection_functor(p))
    if not is_action_isomorphism(mapping, p, q):
        raise InvariantError(f"tau for {p.name} is not an equivariant bijection")
    return mapping


def eta(F: GroupoidFunctor) -> GroupoidFunctor:
    """
    η_Γ: h ↦ (Γ(h)|d(h)) from H onto the action groupoid of α^Γ, verified
    to be an isomorphism with Γ^{α^Γ} ∘ η_Γ = Γ.

    Raises:
        AxiomError: If F is not star-injective
        InvariantError: If the verification fails
    """
    induced = induced_partial_action(F)
    projection = projection_functor(induced)
    mapping = {h: pack(F(h), F.source.d(h)) for h in F.source.elements}
    E = GroupoidFunctor(F.source, projection.source, mapping, name=f"eta_{F.name}")
    if not verify_functor(E).passed or not is_bijective(E):
        raise InvariantError(f"eta for {F.name} is not an isomorphism")
    if any(projection(E(h)) != F(h) for h in F.source.elements):
        raise InvariantError(f"eta for {F.name} does not commute with the projections")
    logger.debug(f"Verified eta for {F.name} on {len(mapping)} elements")
    return E


# Morphisms on both sides -----------------------------------------------------


def verify_star_morphism(f: GroupoidFunctor, F1: GroupoidFunctor, F2: GroupoidFunctor) -> ValidationReport:
    """
    Check that f: H₁ → H₂ is a functor with F2 ∘ f = F1.

    Tags: functor, commutes.
    """
    report = ValidationReport(subject=f"morphism {F1.name} -> {F2.name}")
    report.extend(verify_functor(f), prefix="functor:")
    for h in F1.source.elements:
        if F2(f(h)) != F1(h):
            report.add("commutes", (h,), f"{F2.name}({f.name}({h})) = {F2(f(h))} != {F1.name}({h}) = {F1(h)}")
    return report


def lift_action_morphism(f: Mapping[Point, Point], p: PartialActionTable,
                         q: PartialActionTable) -> GroupoidFunctor:
    """
    The functor (g|x) ↦ (g|f(x)) between action groupoids of a morphism f: p → q.

    Raises:
        AxiomError: If f is not an action morphism
    """
    if not is_action_morphism(f, p, q):
        raise AxiomError(f"point map is not a morphism {p.name} -> {q.name}")
    mapping = {pack(g, x): pack(g, f[x]) for g, x in p.domain}
    return GroupoidFunctor(action_groupoid(p), action_groupoid(q), mapping, name="F(f)")


def objects_map(f: GroupoidFunctor) -> Dict[str, str]:
    """Restriction of a functor to objects, as a point map H₁₀ → H₂₀."""
    return {e: f(e) for e in f.source.object_list}


def tau_naturality(f: Mapping[Point, Point], p: PartialActionTable, q: PartialActionTable) -> bool:
    """τ_q ∘ f = GF(f) ∘ τ_p on every point of p."""
    tau_p, tau_q = tau(p), tau(q)
    lifted = objects_map(lift_action_morphism(f, p, q))
    bad = [x for x in p.carrier if tau_q[f[x]] != lifted[tau_p[x]]]
    if bad:
        logger.error(f"tau naturality fails at {bad[0]} for {p.name} -> {q.name}")
    return not bad


def eta_naturality(f: GroupoidFunctor, F1: GroupoidFunctor, F2: GroupoidFunctor) -> bool:
    """η_{F2} ∘ f = FG(f) ∘ η_{F1} on every element of H₁."""
    if not verify_star_morphism(f, F1, F2).passed:
        raise AxiomError(f"{f.name} is not a morphism {F1.name} -> {F2.name}")
    eta1, eta2 = eta(F1), eta(F2)
    point_map = objects_map(f)
    lifted = lift_action_morphism(point_map, induced_partial_action(F1), induced_partial_action(F2))
    left = compose_functors(eta2, f)
    right = compose_functors(lifted, eta1)
    bad = [h for h in F1.source.elements if left(h) != right(h)]
    if bad:
        logger.error(f"eta naturality fails at {bad[0]} for {F1.name} -> {F2.name}")
    return not bad


def same_action(p: PartialActionTable, q: PartialActionTable) -> bool:
    """Equal groupoid, carrier set and action map."""
    return (
        p.groupoid.elements == q.groupoid.elements
        and set(p.carrier) == set(q.carrier)
        and dict(p.act) == dict(q.act)
    )


def covering_correspondence(subject: Union[PartialActionTable, GroupoidFunctor]) -> Tuple[bool, bool]:
    """
    Global/covering flags across a round trip.

    For a partial action p: (is_global(p), projection of p is a covering).
    For a star-injective functor F: (F is a covering, induced action is global).
    The two flags always agree.
    """
    if isinstance(subject, PartialActionTable):
        return is_global(subject), classify_functor(projection_functor(subject)).covering
    return classify_functor(subject).covering, is_global(induced_partial_action(subject))


# Set-valued functors -----------------------------------------------------------


@dataclass(frozen=True)
class SetFunctor:
    """A functor G → Set: a finite fiber per object and a bijection per element."""

    source: GroupoidTable
    objmap: Mapping[str, Tuple[Point, ...]] = field(hash=False)
    morphmap: Mapping[str, Mapping[Point, Point]] = field(hash=False)


def validate_setfunctor(S: SetFunctor) -> ValidationReport:
    """
    Tags: bijection, identity, composition.
    """
    t = S.source
    report = ValidationReport(subject=f"set functor on {t.name}")
    for g in t.elements:
        source, target = set(S.objmap[t.d(g)]), set(S.objmap[t.r(g)])
        bijection = S.morphmap.get(g, {})
        if set(bijection) != source or set(bijection.values()) != target or len(source) != len(target):
            report.add("bijection", (g,), f"image of {g} is not a bijection X_{t.d(g)} -> X_{t.r(g)}")
    for e in t.object_list:
        if any(S.morphmap.get(e, {}).get(x) != x for x in S.objmap[e]):
            report.add("identity", (e,), f"object {e} does not act as the identity")
    if not report.passed:
        return report
    for (g, h), k in t.comp.items():
        for x in S.objmap[t.d(h)]:
            if S.morphmap[g][S.morphmap[h][x]] != S.morphmap[k][x]:
                report.add("composition", (g, h, x), f"F({g})F({h}) != F({k}) at {x}")
                break
    return report


def is_strongly_injective(S: SetFunctor) -> bool:
    """Fibers over distinct objects are disjoint."""
    seen: set = set()
    for e in S.source.object_list:
        fiber = set(S.objmap[e])
        if fiber & seen:
            return False
        seen |= fiber
    return True


def action_to_setfunctor(p: PartialActionTable) -> SetFunctor:
    """
    The strongly injective set functor of a strict global action:
    e ↦ X_e and g ↦ (x ↦ g·x) on X_{d(g)}.

    Raises:
        StrictnessError: If p is not strict
        AxiomError: If p is not global
    """
    require_strict(p)
    if not is_global(p):
        raise AxiomError(f"{p.name} is not global")
    t = p.groupoid
    fibers: Dict[str, FrozenSet[Point]] = identity_sets(p)
    objmap = {e: tuple(p.sort_points(fibers[e])) for e in t.object_list}
    morphmap = {g: {x: p.act[(g, x)] for x in objmap[t.d(g)]} for g in t.elements}
    S = SetFunctor(t, objmap, morphmap)
    validate_setfunctor(S).raise_if_failed(AxiomError)
    return S


def setfunctor_to_action(S: SetFunctor, name: str = "alpha_S") -> PartialActionTable:
    """
    The global action on the disjoint union of the fibers.

    Raises:
        StrictnessError: If the fibers are not disjoint
        AxiomError: If S is not a functor
    """
    validate_setfunctor(S).raise_if_failed(AxiomError)
    if not is_strongly_injective(S):
        raise StrictnessError(f"set functor on {S.source.name} is not strongly injective")
    t = S.source
    carrier = tuple(x for e in t.object_list for x in S.objmap[e])
    act = {(g, x): y for g in t.elements for x, y in S.morphmap[g].items()}
    p = PartialActionTable(name, t, carrier, act)
    require_partial_action(p)
    return p
