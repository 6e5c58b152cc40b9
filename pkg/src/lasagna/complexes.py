"""Bigraded chain complexes over the dotted-cobordism category.

A complex stores generators (id, grading, flat tangle) and a sparse
differential whose entries are MorphismCombos (or plain Fractions once all
objects are empty).  Differentials raise h2 by exactly 2.  The main
consumers are the crossing-by-crossing scanning build of the Khovanov cube
(attach a crossing, glue shared edge endpoints, deloop, cancel invertible
entries) and the rank computations extracting homology dimensions.

Gluing identifies boundary points in pairs.  Loops created by a closing arc
chain are named by the frozenset of constituent arcs, so gluing a
generator's tangle and gluing a differential entry's cobordism agree on the
nose.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .cobcat import (
    Component,
    Cobordism,
    FlatTangle,
    FrobeniusSpec,
    KHOVANOV,
    MorphismCombo,
    _boundary_circles,
    deloop_maps,
    identity_cobordism,
)
from .gradings import DimTable, Grading, Window
from .linalg import row_reduce


class ComplexError(ValueError):
    pass


class BigradedComplex:
    def __init__(self, spec: FrobeniusSpec = KHOVANOV, truncation: Optional[Window] = None):
        self.spec = spec
        self.gens: dict[int, tuple[Grading, FlatTangle]] = {}
        self.d: dict[int, dict[int, MorphismCombo]] = {}
        self.d_in: dict[int, set[int]] = {}
        self.truncation = truncation
        self._next = 0

    # -- construction -------------------------------------------------------

    def add_generator(self, grading: Grading, tangle: FlatTangle) -> int:
        gid = self._next
        self._next += 1
        self.gens[gid] = (grading, tangle)
        self.d[gid] = {}
        self.d_in[gid] = set()
        return gid

    def set_entry(self, s: int, t: int, m: MorphismCombo) -> None:
        gs, _ = self.gens[s]
        gt, _ = self.gens[t]
        if gt.h2 - gs.h2 != 2:
            raise ComplexError("differential entries must raise h2 by exactly 2")
        if m.is_zero():
            self.d[s].pop(t, None)
            self.d_in[t].discard(s)
        else:
            self.d[s][t] = m
            self.d_in[t].add(s)

    def entry(self, s: int, t: int) -> Optional[MorphismCombo]:
        return self.d.get(s, {}).get(t)

    def copy(self) -> "BigradedComplex":
        c = BigradedComplex(self.spec, self.truncation)
        c.gens = dict(self.gens)
        c.d = {s: dict(row) for s, row in self.d.items()}
        c.d_in = {t: set(srcs) for t, srcs in self.d_in.items()}
        c._next = self._next
        return c

    @staticmethod
    def unit(spec: FrobeniusSpec = KHOVANOV) -> "BigradedComplex":
        c = BigradedComplex(spec)
        c.add_generator(Grading(0, 0), FlatTangle((), ()))
        return c

    def generators(self) -> list[int]:
        return sorted(self.gens)

    # -- verification --------------------------------------------------------

    def verify_d_squared(self) -> bool:
        for u in self.gens:
            acc: dict[int, MorphismCombo] = {}
            for v, f in self.d.get(u, {}).items():
                for w, g in self.d.get(v, {}).items():
                    h = f.then(g, self.spec)
                    if w in acc:
                        acc[w] = acc[w] + h
                    else:
                        acc[w] = h
            for w, m in acc.items():
                if not m.is_zero():
                    return False
        return True

    # -- delooping and elimination --------------------------------------------

    def deloop_generator(self, gid: int) -> tuple[int, int]:
        """Split a generator whose tangle has a loop into q+1 and q-1 copies."""
        grading, tangle = self.gens[gid]
        loops = sorted(tangle.loops, key=repr)
        if not loops:
            raise ComplexError("generator has no loop to remove")
        loop = loops[0]
        (out_p, in_p), (out_m, in_m) = deloop_maps(tangle, loop, self.spec)
        g_p = self.add_generator(grading.shift(0, 2), tangle.without_loop(loop))
        g_m = self.add_generator(grading.shift(0, -2), tangle.without_loop(loop))
        ins = [(u, self.d[u][gid]) for u in list(self.d_in[gid])]
        outs = list(self.d.get(gid, {}).items())
        for u, f in ins:
            self.d[u].pop(gid, None)
            self.set_entry(u, g_p, f.then(out_p, self.spec))
            self.set_entry(u, g_m, f.then(out_m, self.spec))
        for v, f in outs:
            self.d_in[v].discard(gid)
            self.set_entry(g_p, v, in_p.then(f, self.spec))
            self.set_entry(g_m, v, in_m.then(f, self.spec))
        del self.gens[gid], self.d[gid], self.d_in[gid]
        return g_p, g_m

    def deloop_all(self) -> None:
        again = True
        while again:
            again = False
            for gid in sorted(self.gens):
                if gid in self.gens and self.gens[gid][1].loops:
                    self.deloop_generator(gid)
                    again = True

    def gaussian_eliminate(self, s: int, t: int) -> None:
        """Remove an invertible entry s -> t with the zig-zag correction."""
        m = self.entry(s, t)
        if m is None:
            raise ComplexError("no such differential entry")
        lam = m.invertible_scalar()
        if lam is None:
            raise ComplexError("entry is not an isomorphism")
        inv_map = MorphismCombo.from_cobordism(
            identity_cobordism(self.gens[t][1]), Fraction(1) / lam
        )
        ins = [(u, self.d[u][t]) for u in self.d_in[t] if u != s]
        outs = [(v, f) for v, f in self.d[s].items() if v != t]
        self._drop_generator(s)
        self._drop_generator(t)
        for u, a in ins:
            for v, b in outs:
                corr = a.then(inv_map, self.spec).then(b, self.spec).scale(-1)
                old = self.entry(u, v)
                self.set_entry(u, v, old + corr if old else corr)

    def _drop_generator(self, gid: int) -> None:
        for v in self.d.pop(gid, {}):
            self.d_in[v].discard(gid)
        for u in self.d_in.pop(gid, set()):
            self.d[u].pop(gid, None)
        del self.gens[gid]

    def _invertible_entries(self) -> list[tuple[int, int]]:
        out = []
        for s, row in self.d.items():
            for t, m in row.items():
                if m.invertible_scalar() is not None:
                    out.append((s, t))
        return out

    def simplify(self, pivot_policy: str = "minfill") -> "BigradedComplex":
        """Deloop all circles and cancel invertible entries to a fixpoint.

        The default policy prefers pivots minimizing the
        (incoming-1)*(outgoing-1) fill-in, ties broken by the source's
        (h2, q2, id); the alternative "ordered" policy takes the lowest
        (h2, q2, id) outright.  Homology does not depend on the choice.
        """
        self.deloop_all()
        while True:
            cands = self._invertible_entries()
            if not cands:
                break

            def cost(st):
                s, t = st
                g = self.gens[s][0]
                fill = (len(self.d_in[t]) - 1) * (len(self.d[s]) - 1)
                if pivot_policy == "ordered":
                    return (g.h2, g.q2, s, t)
                return (fill, g.h2, g.q2, s, t)

            s, t = min(cands, key=cost)
            self.gaussian_eliminate(s, t)
            self.deloop_all()
        return self

    # -- homology --------------------------------------------------------------

    def _scalar_entry(self, m: MorphismCombo) -> Fraction:
        return m.as_scalar()

    def homology_dims(self, window: Optional[Window] = None) -> DimTable:
        """Kernel-minus-image dimensions per grading, inside the window.

        Requires every generator's tangle to be empty (fully scanned closed
        diagram); the sparse rank computation runs per q2 column.
        """
        if window is None:
            window = Window()
        if self.truncation is not None:
            safe = Window(
                None if self.truncation.h2_lo is None else self.truncation.h2_lo + 2,
                None if self.truncation.h2_hi is None else self.truncation.h2_hi - 2,
                self.truncation.q2_lo,
                self.truncation.q2_hi,
            )
            if not safe.contains_window(window):
                raise ComplexError(
                    f"window {window} exceeds the built region {self.truncation} "
                    "minus one column of slack"
                )
        for gid, (_, tangle) in self.gens.items():
            if tangle.keys():
                raise ComplexError(
                    "homology needs a fully reduced complex over the empty tangle"
                )
        blocks: dict[tuple[int, int], list[int]] = {}
        for gid, (g, _) in self.gens.items():
            blocks.setdefault((g.h2, g.q2), []).append(gid)
        ranks: dict[tuple[int, int], int] = {}
        for (h2, q2), gids in blocks.items():
            rows = []
            for s in gids:
                row = {
                    t: self._scalar_entry(m)
                    for t, m in self.d.get(s, {}).items()
                    if self._scalar_entry(m)
                }
                if row:
                    rows.append(row)
            ranks[(h2, q2)] = len(row_reduce(rows))
        out = DimTable()
        for (h2, q2), gids in blocks.items():
            dim = len(gids) - ranks.get((h2, q2), 0) - ranks.get((h2 - 2, q2), 0)
            g = Grading(h2, q2)
            if dim and window.contains(g):
                out.add(g, dim)
        return out

    def euler_characteristic(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g, _ in self.gens.values():
            if g.h2 % 2:
                raise ComplexError("Euler characteristic needs integral h")
            out[g.q2] = out.get(g.q2, 0) + (-1) ** (g.h2 // 2)
        return {q: c for q, c in out.items() if c}

    # -- structural operations ---------------------------------------------------

    def shift(self, dh2: int, dq2: int) -> "BigradedComplex":
        c = self.copy()
        c.gens = {gid: (g.shift(dh2, dq2), t) for gid, (g, t) in self.gens.items()}
        return c

    def transpose(self) -> "BigradedComplex":
        """Formal dual: arrows reversed, gradings negated."""
        c = BigradedComplex(self.spec)
        mapping = {}
        for gid in self.generators():
            g, t = self.gens[gid]
            mapping[gid] = c.add_generator(Grading(-g.h2, -g.q2), t)
        for s, row in self.d.items():
            for t, m in row.items():
                c.set_entry(mapping[t], mapping[s], m.transpose())
        if self.truncation is not None:
            c.truncation = self.truncation.reflect()
        return c

    def relabel_gradings(self, fn: Callable[[Grading], Grading]) -> "BigradedComplex":
        c = self.copy()
        c.gens = {gid: (fn(g), t) for gid, (g, t) in self.gens.items()}
        return c


# -- gluing machinery -------------------------------------------------------


def glue_tangle(t: FlatTangle, pairs: list[tuple]) -> tuple[FlatTangle, dict]:
    """Identify boundary points of t in pairs.

    Returns the glued tangle and a key map old arc/loop -> new arc or loop.
    A chain of arcs closing up becomes a loop named ('loop', frozenset of
    original arcs merged into it), deterministically.
    """
    arcs = set(t.arcs)
    loops = set(t.loops)
    arc_at: dict = {}
    for a in arcs:
        for p in a:
            arc_at[p] = a
    origin: dict = {a: frozenset([a]) for a in arcs}  # current arc -> original arcs
    keymap: dict = {k: k for k in list(arcs) + list(loops)}

    def remap(olds, new):
        for o in olds:
            keymap[o] = new

    for p, q in pairs:
        if p not in arc_at or q not in arc_at:
            raise ComplexError(f"gluing point {p!r} or {q!r} not on the boundary")
        A = arc_at.pop(p)
        if q not in A:
            B = arc_at.pop(q)
        else:
            B = A
        if A == B:
            if A != frozenset((p, q)):
                raise ComplexError("cannot glue two interior points of one arc")
            # arc closes into a loop
            loop = ("loop", origin[A])
            arcs.discard(A)
            loops.add(loop)
            remap(origin[A], loop)
            del origin[A]
            continue
        (r,) = A - {p}
        (s,) = B - {q}
        arcs.discard(A)
        arcs.discard(B)
        C = frozenset((r, s))
        arcs.add(C)
        merged = origin[A] | origin[B]
        origin[C] = merged
        del origin[A]
        if B in origin:
            del origin[B]
        arc_at[r] = C
        arc_at[s] = C
        remap(merged, C)
    return FlatTangle(arcs, loops), keymap


def glue_cobordism(cob: Cobordism, pairs: list[tuple]) -> Cobordism:
    """Self-glue a cobordism along boundary point pairs (same pairs on both ends)."""
    src, src_map = glue_tangle(cob.source, pairs)
    tgt, tgt_map = glue_tangle(cob.target, pairs)
    s_arc_at = {}
    for a in cob.source.arcs:
        for p in a:
            s_arc_at[p] = a
    comp_of: dict = {}
    for i, c in enumerate(cob.comps):
        for node in c.nodes:
            comp_of[node] = i
    parent = list(range(len(cob.comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    glued_in: dict[int, int] = {}
    for p, q in pairs:
        ca = comp_of[("s", s_arc_at[p])]
        cb = comp_of[("s", s_arc_at[q])]
        union(ca, cb)
    for p, q in pairs:
        root = find(comp_of[("s", s_arc_at[p])])
        glued_in[root] = glued_in.get(root, 0) + 1
    # regroup after all unions: counts keyed by final root
    counts: dict[int, int] = {}
    for root, n in glued_in.items():
        counts[find(root)] = counts.get(find(root), 0) + n

    groups: dict[int, list[int]] = {}
    for i in range(len(cob.comps)):
        groups.setdefault(find(i), []).append(i)

    comps = []
    for root, idxs in groups.items():
        nodes = set()
        chi = 0
        dots = 0
        for i in idxs:
            c = cob.comps[i]
            chi += 2 - 2 * c.genus - _boundary_circles(c.nodes)
            dots += c.dots
            for side, k in c.nodes:
                m = src_map if side == "s" else tgt_map
                nodes.add((side, m[k]))
        chi -= counts.get(root, 0)
        nodes = frozenset(nodes)
        b_new = _boundary_circles(nodes) if nodes else 0
        genus2 = 2 - b_new - chi
        if genus2 % 2 or genus2 < 0:
            raise AssertionError("non-surface gluing of a cobordism")
        comps.append(Component(nodes, dots, genus2 // 2))
    return Cobordism(src, tgt, comps)


def _disjoint_tangle(a: FlatTangle, b: FlatTangle) -> FlatTangle:
    if a.points & b.points or a.loops & b.loops:
        raise ComplexError("tangles to tensor must have disjoint labels")
    return FlatTangle(list(a.arcs) + list(b.arcs), list(a.loops) + list(b.loops))


def _disjoint_cobordism(f: Cobordism, g: Cobordism) -> Cobordism:
    return Cobordism(
        _disjoint_tangle(f.source, g.source),
        _disjoint_tangle(f.target, g.target),
        list(f.comps) + list(g.comps),
    )


def planar_tensor(
    a: BigradedComplex,
    b: BigradedComplex,
    gluing: Optional[list[tuple]] = None,
) -> BigradedComplex:
    """Koszul-signed tensor of two complexes, then glue listed point pairs.

    Gradings add; the sign on id (x) d_b entries is (-1)^(h(a-generator)).
    """
    if a.spec != b.spec:
        raise ComplexError("tensor factors must share a Frobenius spec")
    out = BigradedComplex(a.spec)
    pairs = list(gluing or [])
    index: dict[tuple[int, int], int] = {}
    glue_cache: dict = {}

    def glued_tangle(t: FlatTangle) -> tuple[FlatTangle, dict]:
        if t not in glue_cache:
            glue_cache[t] = glue_tangle(t, pairs) if pairs else (t, {})
        return glue_cache[t]

    for ga in a.generators():
        for gb in b.generators():
            (gr_a, t_a) = a.gens[ga]
            (gr_b, t_b) = b.gens[gb]
            t = _disjoint_tangle(t_a, t_b)
            glued, _ = glued_tangle(t)
            index[(ga, gb)] = out.add_generator(gr_a + gr_b, glued)
    for (ga, gb), gid in index.items():
        (gr_a, t_a) = a.gens[ga]
        (gr_b, t_b) = b.gens[gb]
        if gr_a.h2 % 2:
            raise ComplexError("Koszul sign needs integral h on the left factor")
        # d_a (x) id
        for ta, m in a.d.get(ga, {}).items():
            tgt = index[(ta, gb)]
            entry = _tensor_entry(m, None, t_a, t_b, pairs, out.spec)
            _accumulate(out, gid, tgt, entry)
        # (-1)^h id (x) d_b
        sign = -1 if (gr_a.h2 // 2) % 2 else 1
        for tb, m in b.d.get(gb, {}).items():
            tgt = index[(ga, tb)]
            entry = _tensor_entry(None, m, t_a, t_b, pairs, out.spec).scale(sign)
            _accumulate(out, gid, tgt, entry)
    return out


def _tensor_entry(
    ma: Optional[MorphismCombo],
    mb: Optional[MorphismCombo],
    t_a: FlatTangle,
    t_b: FlatTangle,
    pairs: list[tuple],
    spec: FrobeniusSpec,
) -> MorphismCombo:
    from .cobcat import reduce as cob_reduce

    if ma is None:
        ma = MorphismCombo.from_cobordism(identity_cobordism(t_a))
    if mb is None:
        mb = MorphismCombo.from_cobordism(identity_cobordism(t_b))
    src = None
    tgt = None
    terms = {}
    for ca, va in ma.terms.items():
        for cb, vb in mb.terms.items():
            cob = _disjoint_cobordism(ca, cb)
            if pairs:
                cob = glue_cobordism(cob, pairs)
            terms[cob] = terms.get(cob, Fraction(0)) + va * vb
            src, tgt = cob.source, cob.target
    if src is None:
        # one factor is zero; produce the zero morphism on glued endpoints
        sa, _ = glue_tangle(_disjoint_tangle(ma.source, mb.source), pairs)
        ta, _ = glue_tangle(_disjoint_tangle(ma.target, mb.target), pairs)
        return MorphismCombo.zero(sa, ta)
    return cob_reduce(MorphismCombo(src, tgt, terms), spec)


def _accumulate(c: BigradedComplex, s: int, t: int, m: MorphismCombo) -> None:
    old = c.entry(s, t)
    c.set_entry(s, t, old + m if old else m)
