"""
Line-oriented text formats.

GPD (groupoid), PACT (partial action), FUNC (functor) and AUT (group action by
automorphisms). Documents are parsed into GpdDocument records; loaders turn
them into library objects, resolving referenced files relative to the
referencing file. serialize() always writes the canonical form, so
serialize(parse(text)) canonicalizes and is stable under repetition.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from loguru import logger

from .core import GroupoidFunctor, GroupoidTable
from .errors import FormatError
from .pact import PartialActionTable
from .prod import AutAction

KINDS = ("groupoid", "paction", "functor", "autaction")


@dataclass
class GpdDocument:
    """A parsed text document; only the fields of its kind are populated."""

    kind: str
    name: str
    refs: Tuple[str, ...] = ()
    objects: List[str] = field(default_factory=list)
    arrows: List[Tuple[str, str, str]] = field(default_factory=list)
    inverses: List[Tuple[str, str]] = field(default_factory=list)
    products: List[Tuple[str, str, str]] = field(default_factory=list)
    points: List[str] = field(default_factory=list)
    acts: List[Tuple[str, str, str]] = field(default_factory=list)
    maps: List[Tuple[str, str]] = field(default_factory=list)
    perms: List[Tuple[str, List[Tuple[str, str]]]] = field(default_factory=list)
    lines: Dict[Tuple[str, ...], int] = field(default_factory=dict, compare=False)

    def line_of(self, *key: str) -> Optional[int]:
        return self.lines.get(key)


# Parsing ----------------------------------------------------------------------


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].strip()


def _header(tokens: List[str], lineno: int) -> GpdDocument:
    kind = tokens[0]
    if kind == "groupoid" and len(tokens) == 2:
        return GpdDocument(kind, tokens[1])
    if kind == "paction" and len(tokens) == 4 and tokens[2] == "on":
        return GpdDocument(kind, tokens[1], refs=(tokens[3],))
    if kind == "functor" and len(tokens) == 6 and tokens[2] == ":" and tokens[4] == "->":
        return GpdDocument(kind, tokens[1], refs=(tokens[3], tokens[5]))
    if kind == "autaction" and len(tokens) == 6 and tokens[2] == ":" and tokens[4] == "on":
        return GpdDocument(kind, tokens[1], refs=(tokens[3], tokens[5]))
    if kind in KINDS:
        raise FormatError(f"malformed {kind} header", line=lineno)
    raise FormatError(f"unknown document kind '{kind}'", line=lineno)


def parse(text: str) -> GpdDocument:
    """
    Parse one document.

    Args:
        text: Document text

    Returns:
        GpdDocument: Declarations in file order

    Raises:
        FormatError: On syntax errors, duplicate declarations or unknown
            references, with the offending line number
    """
    doc: Optional[GpdDocument] = None
    ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if ended:
            raise FormatError("content after 'end'", line=lineno)
        tokens = line.split()
        if doc is None:
            doc = _header(tokens, lineno)
            continue
        if tokens == ["end"]:
            ended = True
            continue
        if doc.kind == "groupoid":
            _groupoid_line(doc, line, tokens, lineno)
        elif doc.kind == "paction":
            _paction_line(doc, line, tokens, lineno)
        elif doc.kind == "functor":
            _functor_line(doc, tokens, lineno)
        else:
            _autaction_line(doc, line, tokens, lineno)

    if doc is None:
        raise FormatError("empty document")
    if not ended:
        raise FormatError(f"{doc.kind} {doc.name}: missing 'end'")
    if doc.kind == "groupoid":
        _check_groupoid_document(doc)
    return doc


def _declare(doc: GpdDocument, key: Tuple[str, ...], lineno: int, what: str) -> None:
    if key in doc.lines:
        raise FormatError(f"duplicate {what} (first on line {doc.lines[key]})", line=lineno)
    doc.lines[key] = lineno


def _groupoid_line(doc: GpdDocument, line: str, tokens: List[str], lineno: int) -> None:
    keyword = tokens[0]
    if line.startswith("objects:"):
        _declare(doc, ("objects",), lineno, "objects line")
        ids = line[len("objects:"):].split()
        if not ids:
            raise FormatError("objects line lists no objects", line=lineno)
        for e in ids:
            _declare(doc, ("element", e), lineno, f"element {e}")
        doc.objects.extend(ids)
    elif keyword == "arrow":
        if len(tokens) != 6 or tokens[2] != ":" or tokens[4] != "->":
            raise FormatError("expected 'arrow <id> : <obj> -> <obj>'", line=lineno)
        _declare(doc, ("element", tokens[1]), lineno, f"element {tokens[1]}")
        doc.arrows.append((tokens[1], tokens[3], tokens[5]))
    elif keyword == "inv":
        if len(tokens) != 4 or tokens[2] != "=":
            raise FormatError("expected 'inv <id> = <id>'", line=lineno)
        _declare(doc, ("inv", tokens[1]), lineno, f"inverse of {tokens[1]}")
        doc.inverses.append((tokens[1], tokens[3]))
    elif keyword == "comp":
        if len(tokens) != 5 or tokens[3] != "=":
            raise FormatError("expected 'comp <id> <id> = <id>'", line=lineno)
        _declare(doc, ("comp", tokens[1], tokens[2]), lineno, f"product {tokens[1]} {tokens[2]}")
        doc.products.append((tokens[1], tokens[2], tokens[4]))
    else:
        raise FormatError(f"unexpected '{keyword}' in groupoid document", line=lineno)


def _check_groupoid_document(doc: GpdDocument) -> None:
    if not doc.objects:
        raise FormatError(f"groupoid {doc.name}: no objects line")
    objects = set(doc.objects)
    d = {e: e for e in doc.objects}
    r = {e: e for e in doc.objects}
    for g, source, target in doc.arrows:
        lineno = doc.line_of("element", g)
        for endpoint in (source, target):
            if endpoint not in objects:
                raise FormatError(f"arrow {g}: unknown object {endpoint}", line=lineno)
        d[g], r[g] = source, target

    inverse: Dict[str, str] = {e: e for e in doc.objects}
    for g, h in doc.inverses:
        lineno = doc.line_of("inv", g)
        for x in (g, h):
            if x not in d:
                raise FormatError(f"inv references unknown element {x}", line=lineno)
        if d[h] != r[g] or r[h] != d[g]:
            raise FormatError(f"inv {g} = {h}: domains and ranges do not match", line=lineno)
        for a, b in ((g, h), (h, g)):
            if inverse.get(a, b) != b:
                raise FormatError(f"conflicting inverse for {a}", line=lineno)
            inverse[a] = b
    missing = [g for g, _, _ in doc.arrows if g not in inverse]
    if missing:
        raise FormatError(f"groupoid {doc.name}: no inverse declared for {missing[0]}",
                          line=doc.line_of("element", missing[0]))

    for g, h, k in doc.products:
        lineno = doc.line_of("comp", g, h)
        for x in (g, h, k):
            if x not in d:
                raise FormatError(f"comp references unknown element {x}", line=lineno)
        if d[g] != r[h]:
            raise FormatError(f"comp {g} {h}: d({g})={d[g]} but r({h})={r[h]}", line=lineno)


def _paction_line(doc: GpdDocument, line: str, tokens: List[str], lineno: int) -> None:
    if line.startswith("set:"):
        _declare(doc, ("set",), lineno, "set line")
        ids = line[len("set:"):].split()
        for x in ids:
            _declare(doc, ("point", x), lineno, f"point {x}")
        doc.points.extend(ids)
    elif tokens[0] == "act":
        if len(tokens) != 5 or tokens[3] != "=":
            raise FormatError("expected 'act <g> <x> = <y>'", line=lineno)
        g, x, y = tokens[1], tokens[2], tokens[4]
        for point in (x, y):
            if ("point", point) not in doc.lines:
                raise FormatError(f"act references unknown point {point}", line=lineno)
        _declare(doc, ("act", g, x), lineno, f"action of {g} on {x}")
        doc.acts.append((g, x, y))
    else:
        raise FormatError(f"unexpected '{tokens[0]}' in paction document", line=lineno)


def _functor_line(doc: GpdDocument, tokens: List[str], lineno: int) -> None:
    if tokens[0] != "map" or len(tokens) != 4 or tokens[2] != "=":
        raise FormatError("expected 'map <id> = <id>'", line=lineno)
    _declare(doc, ("map", tokens[1]), lineno, f"image of {tokens[1]}")
    doc.maps.append((tokens[1], tokens[3]))


def _autaction_line(doc: GpdDocument, line: str, tokens: List[str], lineno: int) -> None:
    if tokens[0] != "perm" or ":" not in line:
        raise FormatError("expected 'perm <group-elt>: <id>-><id> ...'", line=lineno)
    head, _, rest = line[len("perm"):].partition(":")
    g = head.strip()
    if not g or len(g.split()) != 1:
        raise FormatError("perm needs exactly one group element", line=lineno)
    _declare(doc, ("perm", g), lineno, f"permutation for {g}")
    pairs = []
    for chunk in rest.split():
        source, arrow, target = chunk.partition("->")
        if not arrow or not source or not target:
            raise FormatError(f"bad permutation entry '{chunk}'", line=lineno)
        pairs.append((source, target))
    if len({s for s, _ in pairs}) != len(pairs):
        raise FormatError(f"permutation for {g} maps an element twice", line=lineno)
    doc.perms.append((g, pairs))


# Serialization ----------------------------------------------------------------


def _automatic_products(doc: GpdDocument) -> Dict[Tuple[str, str], str]:
    """Identity and inverse products filled in when a GPD file omits them."""
    d = {e: e for e in doc.objects}
    r = {e: e for e in doc.objects}
    for g, source, target in doc.arrows:
        d[g], r[g] = source, target
    inverse = {e: e for e in doc.objects}
    for g, h in doc.inverses:
        inverse[g], inverse[h] = h, g

    auto: Dict[Tuple[str, str], str] = {}
    for g in d:
        auto[(g, d[g])] = g
        auto[(r[g], g)] = g
    for g in d:
        if g in inverse:
            auto[(inverse[g], g)] = d[g]
            auto[(g, inverse[g])] = r[g]
    return auto


def serialize(doc: GpdDocument) -> str:
    """
    Canonical text of a document.

    Groupoids list non-identity arrows and products in declared element order
    and omit identity and inverse products. Act and map lines keep document
    order; documents built from objects list them in (element, point) order.
    Automorphism permutations list moved elements only.
    """
    if doc.kind == "groupoid":
        return _serialize_groupoid(doc)
    if doc.kind == "paction":
        lines = [f"paction {doc.name} on {doc.refs[0]}", "set: " + " ".join(doc.points)]
        lines += [f"act {g} {x} = {y}" for g, x, y in doc.acts]
    elif doc.kind == "functor":
        lines = [f"functor {doc.name} : {doc.refs[0]} -> {doc.refs[1]}"]
        lines += [f"map {g} = {h}" for g, h in doc.maps]
    elif doc.kind == "autaction":
        lines = [f"autaction {doc.name} : {doc.refs[0]} on {doc.refs[1]}"]
        for g, pairs in doc.perms:
            moved = " ".join(f"{a}->{b}" for a, b in pairs if a != b)
            lines.append(f"perm {g}: {moved}".rstrip())
    else:
        raise FormatError(f"unknown document kind '{doc.kind}'")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _serialize_groupoid(doc: GpdDocument) -> str:
    order = list(doc.objects) + [g for g, _, _ in doc.arrows]
    index = {g: i for i, g in enumerate(order)}
    objects = set(doc.objects)

    lines = [f"groupoid {doc.name}", "objects: " + " ".join(doc.objects)]
    lines += [f"arrow {g} : {s} -> {t}" for g, s, t in doc.arrows]

    inverse = dict(doc.inverses)
    inverse.update({h: g for g, h in doc.inverses})
    emitted = set()
    for g in order:
        if g in objects or g in emitted or g not in inverse:
            continue
        lines.append(f"inv {g} = {inverse[g]}")
        emitted.update((g, inverse[g]))

    auto = _automatic_products(doc)
    explicit = [
        (g, h, k) for g, h, k in doc.products if auto.get((g, h)) != k
    ]
    explicit.sort(key=lambda entry: (index[entry[0]], index[entry[1]]))
    lines += [f"comp {g} {h} = {k}" for g, h, k in explicit]
    lines.append("end")
    return "\n".join(lines) + "\n"


# Documents <-> objects -----------------------------------------------------------


def groupoid_from_document(doc: GpdDocument) -> GroupoidTable:
    """Build the table, filling omitted identity and inverse products."""
    if doc.kind != "groupoid":
        raise FormatError(f"expected a groupoid document, got {doc.kind}")
    elements = tuple(doc.objects) + tuple(g for g, _, _ in doc.arrows)
    dmap = {e: e for e in doc.objects}
    rmap = {e: e for e in doc.objects}
    for g, source, target in doc.arrows:
        dmap[g], rmap[g] = source, target
    inv = {e: e for e in doc.objects}
    for g, h in doc.inverses:
        inv[g], inv[h] = h, g

    comp = dict(_automatic_products(doc))
    comp.update({(g, h): k for g, h, k in doc.products})
    return GroupoidTable(doc.name, elements, frozenset(doc.objects), dmap, rmap, inv, comp)


def document_from_groupoid(t: GroupoidTable) -> GpdDocument:
    return GpdDocument(
        kind="groupoid",
        name=t.name,
        objects=list(t.object_list),
        arrows=[(g, t.d(g), t.r(g)) for g in t.elements if not t.is_object(g)],
        inverses=[(g, t.inverse(g)) for g in t.elements if not t.is_object(g)
                  and t.index[g] <= t.index[t.inverse(g)]],
        products=[(g, h, k) for (g, h), k in t.comp.items()],
    )


def partial_action_from_document(doc: GpdDocument, groupoid: GroupoidTable) -> PartialActionTable:
    if doc.kind != "paction":
        raise FormatError(f"expected a paction document, got {doc.kind}")
    for g, x, _ in doc.acts:
        if g not in groupoid:
            raise FormatError(f"act references unknown element {g} of {groupoid.name}",
                              line=doc.line_of("act", g, x))
    return PartialActionTable(doc.name, groupoid, tuple(doc.points),
                              {(g, x): y for g, x, y in doc.acts})


def document_from_partial_action(p: PartialActionTable, groupoid_ref: str) -> GpdDocument:
    return GpdDocument(
        kind="paction",
        name=p.name,
        refs=(groupoid_ref,),
        points=list(p.carrier),
        acts=[(g, x, p.act[(g, x)]) for g, x in p.domain],
    )


def functor_from_document(doc: GpdDocument, source: GroupoidTable, target: GroupoidTable) -> GroupoidFunctor:
    if doc.kind != "functor":
        raise FormatError(f"expected a functor document, got {doc.kind}")
    for g, h in doc.maps:
        if g not in source or h not in target:
            raise FormatError(f"map {g} = {h} references an unknown element", line=doc.line_of("map", g))
    return GroupoidFunctor(source, target, dict(doc.maps), name=doc.name)


def document_from_functor(F: GroupoidFunctor, source_ref: str, target_ref: str) -> GpdDocument:
    return GpdDocument(
        kind="functor",
        name=F.name,
        refs=(source_ref, target_ref),
        maps=[(g, F(g)) for g in F.source.elements],
    )


def autaction_from_document(doc: GpdDocument, group: GroupoidTable, target: GroupoidTable) -> AutAction:
    if doc.kind != "autaction":
        raise FormatError(f"expected an autaction document, got {doc.kind}")
    omega: Dict[str, Dict[str, str]] = {}
    for g, pairs in doc.perms:
        if g not in group:
            raise FormatError(f"perm for unknown group element {g}", line=doc.line_of("perm", g))
        perm = {x: x for x in target.elements}
        for a, b in pairs:
            if a not in target or b not in target:
                raise FormatError(f"perm {g} references unknown element", line=doc.line_of("perm", g))
            perm[a] = b
        omega[g] = perm
    for g in group.elements:
        omega.setdefault(g, {x: x for x in target.elements})
    return AutAction(group, target, omega, name=doc.name)


def document_from_autaction(act: AutAction, group_ref: str, target_ref: str) -> GpdDocument:
    return GpdDocument(
        kind="autaction",
        name=act.name,
        refs=(group_ref, target_ref),
        perms=[(g, [(x, act(g, x)) for x in act.target.elements]) for g in act.group.elements],
    )


# Files --------------------------------------------------------------------------

PathLike = Union[str, Path]


def read_document(path: PathLike) -> GpdDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    try:
        return parse(text)
    except FormatError as e:
        raise FormatError(f"{path.name}: {e}") from e


def _expect(doc: GpdDocument, kind: str, path: Path) -> None:
    if doc.kind != kind:
        raise FormatError(f"{path.name}: expected a {kind} document, found {doc.kind}")


def load_groupoid(path: PathLike) -> GroupoidTable:
    """Read a GPD file."""
    path = Path(path)
    doc = read_document(path)
    _expect(doc, "groupoid", path)
    t = groupoid_from_document(doc)
    logger.debug(f"Loaded groupoid {t.name} from {path} ({len(t)} elements)")
    return t


def load_partial_action(path: PathLike) -> PartialActionTable:
    """Read a PACT file and the groupoid it references."""
    path = Path(path)
    doc = read_document(path)
    _expect(doc, "paction", path)
    groupoid = load_groupoid(path.parent / doc.refs[0])
    try:
        return partial_action_from_document(doc, groupoid)
    except FormatError as e:
        raise FormatError(f"{path.name}: {e}") from e


def load_functor(path: PathLike) -> GroupoidFunctor:
    """Read a FUNC file and both groupoids it references."""
    path = Path(path)
    doc = read_document(path)
    _expect(doc, "functor", path)
    source = load_groupoid(path.parent / doc.refs[0])
    target = load_groupoid(path.parent / doc.refs[1])
    try:
        return functor_from_document(doc, source, target)
    except FormatError as e:
        raise FormatError(f"{path.name}: {e}") from e


def load_autaction(path: PathLike) -> AutAction:
    """Read an AUT file with its group and target groupoid."""
    path = Path(path)
    doc = read_document(path)
    _expect(doc, "autaction", path)
    group = load_groupoid(path.parent / doc.refs[0])
    target = load_groupoid(path.parent / doc.refs[1])
    try:
        return autaction_from_document(doc, group, target)
    except FormatError as e:
        raise FormatError(f"{path.name}: {e}") from e


def dump_groupoid(t: GroupoidTable) -> str:
    return serialize(document_from_groupoid(t))


def dump_partial_action(p: PartialActionTable, groupoid_ref: str) -> str:
    return serialize(document_from_partial_action(p, groupoid_ref))


def dump_functor(F: GroupoidFunctor, source_ref: str, target_ref: str) -> str:
    return serialize(document_from_functor(F, source_ref, target_ref))


def dump_autaction(act: AutAction, group_ref: str, target_ref: str) -> str:
    return serialize(document_from_autaction(act, group_ref, target_ref))
