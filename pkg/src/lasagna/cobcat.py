"""Dotted cobordisms between crossingless tangles, linearized over Q.

Objects are flat tangles: a perfect matching ("arcs") on a set of boundary
points plus a set of closed loops.  A cobordism between two flat tangles
with the same boundary points is recorded by its connected components; a
component knows which source/target arcs and loops it bounds, its dot count
and its genus.  Over Q this coarse data determines the morphism up to the
local relations, which is exactly what evaluation needs.

Local relations (Frobenius parameter c = value of a twice-dotted component):
undotted sphere = 0, once-dotted sphere = 1, two dots on a component = c
times no dots, and neck-cutting, whose closed consequence is that a handle
may be traded for a dot at the price of a factor 2.  `reduce` applies these
as rewrite steps; it never hard-codes higher-genus values.

Gradings are bookkept by the complexes that use these morphisms, not here.
The delooping maps follow the classical Khovanov convention: the circle is
isomorphic to the empty tangle shifted by q^{+1} and q^{-1}, with inclusion
(plain cup, dotted cup) and projection (dotted cap, plain cap) respectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional


@dataclass(frozen=True)
class FrobeniusSpec:
    """The deformation parameter: dot^2 = c. Khovanov c=0, Lee c=1."""

    c: Fraction = Fraction(0)


KHOVANOV = FrobeniusSpec(Fraction(0))
LEE = FrobeniusSpec(Fraction(1))


class FlatTangle:
    """A crossingless matching of boundary points plus closed loops."""

    __slots__ = ("arcs", "loops", "_hash")

    def __init__(self, arcs: Iterable, loops: Iterable = ()):
        arcs = frozenset(frozenset(a) for a in arcs)
        for a in arcs:
            if len(a) != 2:
                raise ValueError("an arc joins exactly two boundary points")
        pts = [p for a in arcs for p in a]
        if len(pts) != len(set(pts)):
            raise ValueError("boundary points must be matched exactly once")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "loops", frozenset(loops))
        object.__setattr__(self, "_hash", hash((arcs, frozenset(loops))))

    @property
    def points(self) -> frozenset:
        return frozenset(p for a in self.arcs for p in a)

    def keys(self):
        return list(self.arcs) + list(self.loops)

    def without_loop(self, loop) -> "FlatTangle":
        if loop not in self.loops:
            raise ValueError("no such loop")
        return FlatTangle(self.arcs, self.loops - {loop})

    def with_loop(self, loop) -> "FlatTangle":
        return FlatTangle(self.arcs, self.loops | {loop})

    def __eq__(self, other):
        return (
            isinstance(other, FlatTangle)
            and self.arcs == other.arcs
            and self.loops == other.loops
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        arcs = sorted(tuple(sorted(a, key=repr)) for a in self.arcs)
        return f"FlatTangle(arcs={arcs}, loops={sorted(self.loops, key=repr)})"


EMPTY_TANGLE = FlatTangle((), ())


def _skey(x):
    return repr(x)


@dataclass(frozen=True)
class Component:
    nodes: frozenset  # ('s'|'t', arc-or-loop key)
    dots: int
    genus: int

    def sort_key(self):
        return (sorted(map(_skey, self.nodes)), self.dots, self.genus)


class Cobordism:
    """A connected-component-encoded cobordism between two flat tangles."""

    __slots__ = ("source", "target", "comps", "_hash")

    def __init__(self, source: FlatTangle, target: FlatTangle, comps: Iterable[Component]):
        comps = tuple(sorted(comps, key=Component.sort_key))
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "comps", comps)
        object.__setattr__(self, "_hash", hash((source, target, comps)))

    def __eq__(self, other):
        return (
            isinstance(other, Cobordism)
            and self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Cobordism({self.comps!r})"

    def total_dots(self) -> int:
        return sum(c.dots for c in self.comps)

    def transpose(self) -> "Cobordism":
        flip = {"s": "t", "t": "s"}
        comps = [
            Component(frozenset((flip[side], k) for side, k in c.nodes), c.dots, c.genus)
            for c in self.comps
        ]
        return Cobordism(self.target, self.source, comps)


def _boundary_circle_partition(nodes: frozenset) -> list[frozenset]:
    """Boundary circles of a component as node subsets.

    Each loop node is its own circle; arc-cycles alternate source and target
    arcs through shared endpoints (the vertical boundary line at a point p
    connects the source arc at p to the target arc at p).
    """
    circles = [frozenset([n]) for n in nodes if not isinstance(n[1], frozenset)]
    arc_at = {"s": {}, "t": {}}
    for side, k in nodes:
        if isinstance(k, frozenset):
            for p in k:
                arc_at[side][p] = k
    if set(arc_at["s"]) != set(arc_at["t"]):
        raise ValueError("component boundary points do not match on both sides")
    seen_arcs = set()
    for a in sorted(set(arc_at["s"].values()), key=_skey):
        if a in seen_arcs:
            continue
        members = set()
        state = ("s", a, min(a, key=_skey))  # on arc a, entered at this point
        walk = set()
        while state not in walk:
            walk.add(state)
            side, arc, entry = state
            members.add((side, arc))
            if side == "s":
                seen_arcs.add(arc)
            (exit_pt,) = arc - {entry}
            other = "t" if side == "s" else "s"
            state = (other, arc_at[other][exit_pt], exit_pt)
        circles.append(frozenset(members))
    return circles


def _boundary_circles(nodes: frozenset) -> int:
    return len(_boundary_circle_partition(nodes))


def identity_cobordism(t: FlatTangle) -> Cobordism:
    comps = [Component(frozenset({("s", k), ("t", k)}), 0, 0) for k in t.keys()]
    return Cobordism(t, t, comps)


def cap(t: FlatTangle, loop, dotted: bool = False) -> Cobordism:
    """Kill a loop of t with a disk (optionally dotted)."""
    tgt = t.without_loop(loop)
    comps = [Component(frozenset({("s", loop)}), 1 if dotted else 0, 0)]
    for k in tgt.keys():
        comps.append(Component(frozenset({("s", k), ("t", k)}), 0, 0))
    return Cobordism(t, tgt, comps)


def cup(t: FlatTangle, loop, dotted: bool = False) -> Cobordism:
    """Create a loop on top of t with a disk (optionally dotted)."""
    tgt = t.with_loop(loop)
    comps = [Component(frozenset({("t", loop)}), 1 if dotted else 0, 0)]
    for k in t.keys():
        comps.append(Component(frozenset({("s", k), ("t", k)}), 0, 0))
    return Cobordism(t, tgt, comps)


def elementary_saddle(source: FlatTangle, target: FlatTangle, moved_keys_s, moved_keys_t) -> Cobordism:
    """Cobordism which is a product away from one saddle component."""
    nodes = {("s", k) for k in moved_keys_s} | {("t", k) for k in moved_keys_t}
    comps = [Component(frozenset(nodes), 0, 0)]
    for k in set(source.keys()) - set(moved_keys_s):
        comps.append(Component(frozenset({("s", k), ("t", k)}), 0, 0))
    return Cobordism(source, target, comps)


class MorphismCombo:
    """Finite Q-linear combination of cobordisms with common source/target."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: FlatTangle, target: FlatTangle, terms: Optional[dict] = None):
        self.source = source
        self.target = target
        self.terms: dict[Cobordism, Fraction] = {}
        if terms:
            for cob, coeff in terms.items():
                self._add_term(cob, Fraction(coeff))

    def _add_term(self, cob: Cobordism, coeff: Fraction) -> None:
        if not coeff:
            return
        cur = self.terms.get(cob, Fraction(0)) + coeff
        if cur:
            self.terms[cob] = cur
        else:
            self.terms.pop(cob, None)

    @staticmethod
    def from_cobordism(cob: Cobordism, coeff=Fraction(1)) -> "MorphismCombo":
        return MorphismCombo(cob.source, cob.target, {cob: Fraction(coeff)})

    @staticmethod
    def zero(source: FlatTangle, target: FlatTangle) -> "MorphismCombo":
        return MorphismCombo(source, target)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MorphismCombo") -> "MorphismCombo":
        if self.source != other.source or self.target != other.target:
            raise ValueError("cannot add morphisms with different endpoints")
        out = MorphismCombo(self.source, self.target, dict(self.terms))
        for cob, coeff in other.terms.items():
            out._add_term(cob, coeff)
        return out

    def __neg__(self) -> "MorphismCombo":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "MorphismCombo") -> "MorphismCombo":
        return self + (-other)

    def scale(self, coeff) -> "MorphismCombo":
        coeff = Fraction(coeff)
        return MorphismCombo(
            self.source, self.target, {c: v * coeff for c, v in self.terms.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, MorphismCombo)
            and self.source == other.source
            and self.target == other.target
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"MorphismCombo({len(self.terms)} terms {self.source}->{self.target})"

    def transpose(self) -> "MorphismCombo":
        return MorphismCombo(
            self.target, self.source, {c.transpose(): v for c, v in self.terms.items()}
        )

    def then(self, other: "MorphismCombo", spec: FrobeniusSpec) -> "MorphismCombo":
        """Vertical composition self followed by other, reduced."""
        if self.target != other.source:
            raise ValueError("composition endpoint mismatch")
        out = MorphismCombo(self.source, other.target)
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                cob = _compose_cobordisms(f, g)
                out._add_term(cob, a * b)
        return reduce(out, spec)

    def as_scalar(self) -> Fraction:
        """The coefficient of the empty cobordism, for empty endpoints."""
        if self.source.keys() or self.target.keys():
            raise ValueError("scalar extraction needs empty source and target")
        if not self.terms:
            return Fraction(0)
        [(cob, coeff)] = self.terms.items()
        if cob.comps:
            raise ValueError("combo not reduced to a scalar")
        return coeff

    def invertible_scalar(self) -> Optional[Fraction]:
        """If self is lambda * identity (same tangle, lambda != 0), return lambda."""
        if self.source != self.target or len(self.terms) != 1:
            return None
        [(cob, coeff)] = self.terms.items()
        if cob == identity_cobordism(self.source):
            return coeff
        return None


def _compose_cobordisms(f: Cobordism, g: Cobordism) -> Cobordism:
    if f.target != g.source:
        raise ValueError("cobordism composition endpoint mismatch")
    mid = f.target
    # union-find over pieces of f and g, glued along middle arcs/loops
    pieces = [("f", c) for c in f.comps] + [("g", c) for c in g.comps]
    owner = {}
    for idx, (tag, c) in enumerate(pieces):
        for node in c.nodes:
            owner[(tag, node)] = idx
    parent = list(range(len(pieces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for k in mid.keys():
        union(owner[("f", ("t", k))], owner[("g", ("s", k))])

    groups: dict[int, list] = {}
    for idx in range(len(pieces)):
        groups.setdefault(find(idx), []).append(idx)

    comps = []
    for idxs in groups.values():
        nodes = set()
        chi = 0
        dots = 0
        glued_arcs = 0
        for i in idxs:
            tag, c = pieces[i]
            b = _boundary_circles(c.nodes)
            chi += 2 - 2 * c.genus - b
            dots += c.dots
            for side, k in c.nodes:
                if tag == "f" and side == "s":
                    nodes.add(("s", k))
                elif tag == "g" and side == "t":
                    nodes.add(("t", k))
                elif tag == "f" and side == "t":
                    if isinstance(k, frozenset):
                        glued_arcs += 1
        chi -= glued_arcs
        nodes = frozenset(nodes)
        b_new = _boundary_circles(nodes) if nodes else 0
        genus2 = 2 - b_new - chi
        if genus2 % 2 or genus2 < 0:
            raise AssertionError("non-surface glueing in cobordism composition")
        comps.append(Component(nodes, dots, genus2 // 2))
    return Cobordism(f.source, g.target, comps)


def reduce(m: MorphismCombo, spec: FrobeniusSpec) -> MorphismCombo:
    """Apply the local relations until every term is in normal form."""
    out = MorphismCombo(m.source, m.target)
    for cob, coeff in m.terms.items():
        for cob2, coeff2 in _reduce_cobordism(cob, spec):
            out._add_term(cob2, coeff * coeff2)
    return out


def _reduce_cobordism(cob: Cobordism, spec: FrobeniusSpec):
    """Normal-form expansion of a single cobordism: list of (cobordism, coeff)."""
    pending = [(list(cob.comps), Fraction(1))]
    done = []
    while pending:
        comps, coeff = pending.pop()
        for i, c in enumerate(comps):
            if c.genus > 0:
                # neck-cutting along a handle: two (equal) terms, one dot each
                rest = comps[:i] + comps[i + 1 :]
                cut = Component(c.nodes, c.dots + 1, c.genus - 1)
                pending.append((rest + [cut], coeff))
                pending.append((rest + [cut], coeff))
                break
            circles = _boundary_circle_partition(c.nodes) if c.nodes else []
            if len(circles) >= 2:
                # neck-cutting along a separating curve: split off the first
                # boundary circle as a disk, dot on either side
                first = min(circles, key=lambda s: sorted(map(_skey, s)))
                rest_nodes = c.nodes - first
                rest = comps[:i] + comps[i + 1 :]
                pending.append(
                    (rest + [Component(first, 1, 0), Component(rest_nodes, c.dots, 0)], coeff)
                )
                pending.append(
                    (rest + [Component(first, 0, 0), Component(rest_nodes, c.dots + 1, 0)], coeff)
                )
                break
            if c.dots >= 2:
                if spec.c != 0:
                    rest = comps[:i] + comps[i + 1 :]
                    pending.append(
                        (rest + [Component(c.nodes, c.dots - 2, 0)], coeff * spec.c)
                    )
                break
            if not c.nodes:
                # closed genus-0 component: sphere relations
                rest = comps[:i] + comps[i + 1 :]
                if c.dots == 1:
                    pending.append((rest, coeff))
                # undotted sphere = 0: drop the term entirely
                break
        else:
            done.append((Cobordism(cob.source, cob.target, comps), coeff))
            continue
    return done


def compose(f: MorphismCombo, g: MorphismCombo, spec: FrobeniusSpec) -> MorphismCombo:
    """Composition f then g (f: A->B, g: B->C), in normal form."""
    return f.then(g, spec)


def deloop_maps(t: FlatTangle, loop, spec: FrobeniusSpec):
    """Structure maps of circle ~ empty{+1} + empty{-1}.

    Returns ((out_plus, in_plus), (out_minus, in_minus)) where the plus
    summand carries quantum shift +1: out_plus is the dotted cap, in_plus
    the plain cup, out_minus the plain cap, in_minus the dotted cup.
    """
    out_plus = MorphismCombo.from_cobordism(cap(t, loop, dotted=True))
    out_minus = MorphismCombo.from_cobordism(cap(t, loop, dotted=False))
    base = t.without_loop(loop)
    in_plus = MorphismCombo.from_cobordism(cup(base, loop, dotted=False))
    in_minus = MorphismCombo.from_cobordism(cup(base, loop, dotted=True))
    return (out_plus, in_plus), (out_minus, in_minus)
