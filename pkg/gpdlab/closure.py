"""
Completion of partial groupoid tables.

A coset-enumeration style fixed point: products forced by the identity,
inverse and associativity laws are filled in; when nothing more can be
deduced, the first undefined composable pair (in declared order) receives a
fresh element. Two values forced for the same product are identified when at
least one is fresh, and reported as a contradiction otherwise.
"""

from typing import Dict, Iterable, List, Optional, Set, Tuple

from loguru import logger

from .config import get_settings
from .core import GroupoidTable, Pair, validate_groupoid
from .errors import CompletionError


class _ClosureState:
    """Mutable working copy of a partial table."""

    def __init__(self, partial: GroupoidTable):
        self.name = partial.name
        self.original: Set[str] = set(partial.elements)
        self.objects: Set[str] = set(partial.objects)
        self.order: List[str] = list(partial.elements)
        self.d: Dict[str, str] = dict(partial.dmap)
        self.r: Dict[str, str] = dict(partial.rmap)
        self.inv: Dict[str, str] = dict(partial.inv)
        self.comp: Dict[Pair, str] = {}
        self.source: Dict[Pair, str] = {}
        self.fresh: List[str] = []
        self.alias: Dict[str, str] = {}
        self.pending: List[Tuple[str, str, List[str]]] = []
        self.changed = False
        self.limit = get_settings().closure_max_elements

        for (g, h), k in partial.comp.items():
            self.assign(g, h, k, "given")

    # Bookkeeping ----------------------------------------------------------

    def find(self, g: str) -> str:
        while g in self.alias:
            g = self.alias[g]
        return g

    def new_element(self, d: str, r: str) -> str:
        if len(self.order) >= self.limit:
            raise CompletionError(
                f"{self.name}: completion exceeds {self.limit} elements",
                chain=[f"{len(self.fresh)} fresh elements created"],
            )
        name = f"_t{len(self.fresh)}"
        self.fresh.append(name)
        self.order.append(name)
        self.d[name] = d
        self.r[name] = r
        self.changed = True
        return name

    def assign(self, g: str, h: str, k: str, reason: str) -> None:
        """Record g∘h = k, queueing an identification on conflict."""
        g, h, k = self.find(g), self.find(h), self.find(k)
        if self.d[g] != self.r[h]:
            raise CompletionError(
                f"{self.name}: product of non-composable pair",
                chain=[f"{g}∘{h} = {k} ({reason})", f"d({g})={self.d[g]}", f"r({h})={self.r[h]}"],
            )
        current = self.comp.get((g, h))
        if current is None:
            self.comp[(g, h)] = k
            self.source[(g, h)] = reason
            self.changed = True
        elif current != k:
            chain = [
                f"{g}∘{h} = {current} ({self.source.get((g, h), 'given')})",
                f"{g}∘{h} = {k} ({reason})",
            ]
            self.pending.append((current, k, chain))

    def merge(self, a: str, b: str, chain: List[str]) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        a_fresh, b_fresh = a not in self.original, b not in self.original
        if not a_fresh and not b_fresh:
            logger.error(f"{self.name}: contradiction identifies {a} with {b}")
            raise CompletionError(f"{self.name}: contradictory products force {a} = {b}", chain=chain)
        if self.d[a] != self.d[b] or self.r[a] != self.r[b]:
            raise CompletionError(
                f"{self.name}: cannot identify {a} and {b} with different domain or range",
                chain=chain,
            )

        if a_fresh and b_fresh:
            keep, drop = (a, b) if self.fresh.index(a) < self.fresh.index(b) else (b, a)
        else:
            keep, drop = (b, a) if a_fresh else (a, b)
        logger.debug(f"{self.name}: identifying {drop} with {keep}")

        self.alias[drop] = keep
        self.order.remove(drop)
        self.fresh.remove(drop)
        self.changed = True

        inv_keep, inv_drop = self.inv.get(keep), self.inv.pop(drop, None)
        for g, value in list(self.inv.items()):
            if value == drop:
                self.inv[g] = keep
        if inv_drop is not None:
            inv_drop = self.find(inv_drop)
            if inv_keep is None:
                self.inv[keep] = inv_drop
            elif self.find(inv_keep) != inv_drop:
                self.pending.append((inv_keep, inv_drop, chain + [f"inverses of {keep}, {drop}"]))

        old = self.comp
        old_source = self.source
        self.comp, self.source = {}, {}
        for (g, h), k in old.items():
            self.assign(g, h, k, old_source.get((g, h), "given"))
        del self.d[drop], self.r[drop]

    def flush(self) -> None:
        while self.pending:
            a, b, chain = self.pending.pop(0)
            self.merge(a, b, chain)

    # Deduction ------------------------------------------------------------

    def deduce(self) -> None:
        """Apply every local law once to the current table."""
        for g in list(self.order):
            g = self.find(g)
            if g not in self.d:
                continue
            g_inv = self.find(self.inv[g])
            self.assign(self.r[g], g, g, "left identity")
            self.assign(g, self.d[g], g, "right identity")
            self.assign(g_inv, g, self.d[g], "left inverse")
            self.assign(g, g_inv, self.r[g], "right inverse")
        self.flush()

        for (g, h), k in list(self.comp.items()):
            g, h, k = self.find(g), self.find(h), self.find(k)
            if self.d[k] != self.d[h] or self.r[k] != self.r[g]:
                raise CompletionError(
                    f"{self.name}: product has wrong domain or range",
                    chain=[f"{g}∘{h} = {k}", f"d/r of {k}: {self.d[k]}/{self.r[k]}"],
                )
            g_inv, h_inv, k_inv = (self.find(self.inv[x]) for x in (g, h, k))
            self.assign(h_inv, g_inv, k_inv, f"inverse of {g}∘{h}")
            self.assign(g_inv, k, h, f"cancel {g} from {g}∘{h}")
            self.assign(k, h_inv, g, f"cancel {h} from {g}∘{h}")
        self.flush()

        by_left: Dict[str, List[Tuple[str, str]]] = {}
        for (h, l), m in self.comp.items():
            by_left.setdefault(h, []).append((l, m))
        for (g, h), k in list(self.comp.items()):
            g, h, k = self.find(g), self.find(h), self.find(k)
            for l, m in by_left.get(h, []):
                l, m = self.find(l), self.find(m)
                left = self.comp.get((k, l))
                right = self.comp.get((g, m))
                reason = f"associativity ({g}∘{h})∘{l}"
                if left is not None:
                    self.assign(g, m, left, reason)
                elif right is not None:
                    self.assign(k, l, right, reason)
            self.flush()

    def first_gap(self) -> Optional[Pair]:
        by_range: Dict[str, List[str]] = {}
        for h in self.order:
            by_range.setdefault(self.r[h], []).append(h)
        for g in self.order:
            for h in by_range.get(self.d[g], []):
                if (g, h) not in self.comp:
                    return g, h
        return None

    def fill_gap(self, g: str, h: str) -> None:
        p = self.new_element(self.d[h], self.r[g])
        self.assign(g, h, p, f"fresh product {g}∘{h}")
        g_inv, h_inv = self.find(self.inv[g]), self.find(self.inv[h])
        known = self.comp.get((h_inv, g_inv))
        if known is not None:
            q = self.find(known)
            partner = self.find(self.inv[q])
            if partner != p:
                self.pending.append((partner, p, [f"{g}∘{h} = {p}", f"inverse {h_inv}∘{g_inv} = {q}"]))
                self.flush()
                return
        else:
            q = p if (h_inv, g_inv) == (g, h) else self.new_element(self.r[g], self.d[h])
            self.assign(h_inv, g_inv, q, f"inverse of fresh {g}∘{h}")
        self.inv[p] = q
        if q != p:
            self.inv[q] = p
        logger.debug(f"{self.name}: fresh {p} for {g}∘{h}, inverse {q}")

    # Output ---------------------------------------------------------------

    def result(self) -> GroupoidTable:
        names: Dict[str, str] = {}
        counter = 0
        for fresh in self.fresh:
            while f"_p{counter}" in self.original:
                counter += 1
            names[fresh] = f"_p{counter}"
            counter += 1

        def final(g: str) -> str:
            g = self.find(g)
            return names.get(g, g)

        elements = tuple(final(g) for g in self.order)
        return GroupoidTable(
            self.name,
            elements,
            frozenset(self.objects),
            {final(g): final(self.d[g]) for g in self.order},
            {final(g): final(self.r[g]) for g in self.order},
            {final(g): final(self.inv[g]) for g in self.order},
            {(final(g), final(h)): final(k) for (g, h), k in self.comp.items()},
        )


def complete_closure(partial: GroupoidTable,
                     relations: Iterable[Tuple[str, str, str]] = ()) -> GroupoidTable:
    """
    Smallest groupoid extending a partial table.

    Args:
        partial: Table with consistent d/r/inv and a partial composition
        relations: Extra asserted products (g, h, k) meaning g∘h = k

    Returns:
        GroupoidTable: Completed table; fresh elements are named _p0, _p1, ...
            in creation order and appended after the given elements

    Raises:
        CompletionError: On a contradiction (with the conflicting chain) or
            when the closure_max_elements cap is exceeded
    """
    for g in partial.elements:
        g_inv = partial.inverse(g)
        if partial.d(g_inv) != partial.r(g) or partial.r(g_inv) != partial.d(g):
            raise CompletionError(
                f"{partial.name}: inverse of {g} has inconsistent domain or range",
                chain=[f"{g} : {partial.d(g)} -> {partial.r(g)}",
                       f"{g_inv} : {partial.d(g_inv)} -> {partial.r(g_inv)}"],
            )
        if partial.inverse(g_inv) != g:
            raise CompletionError(f"{partial.name}: inverse is not an involution",
                                  chain=[f"inv {g} = {g_inv}", f"inv {g_inv} = {partial.inverse(g_inv)}"])

    state = _ClosureState(partial)
    for g, h, k in relations:
        partial.require((g, h, k))
        state.assign(g, h, k, "relation")
    state.flush()

    logger.info(f"Completing {partial.name}: {len(partial)} elements, {len(partial.comp)} products")
    rounds = 0
    while True:
        state.changed = True
        while state.changed:
            state.changed = False
            state.deduce()
            rounds += 1
        gap = state.first_gap()
        if gap is None:
            break
        state.fill_gap(*gap)

    completed = state.result()
    report = validate_groupoid(completed)
    if not report.passed:
        first = report.violations[0]
        raise CompletionError(
            f"{partial.name}: completion does not satisfy {first.tag}",
            chain=[first.message],
        )
    logger.success(
        f"Completed {partial.name} in {rounds} rounds: "
        f"{len(completed)} elements ({len(completed) - len(partial)} new)"
    )
    return completed
