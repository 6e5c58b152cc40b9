"""Planar link diagrams with framing points and surgery-region markers.

A diagram is a PD-style combinatorial object: a set of edge ids, a list of
crossings (four incident edges in counterclockwise order starting from the
incoming under-strand, plus an explicit sign), integer-weighted framing
points on edges, and surgery regions each recording the ordered list of
strands passing through it.

Edge orientation bookkeeping: at a crossing ``(e0,e1,e2,e3)`` the
under-strand enters at slot 0 and leaves at slot 2; for sign +1 the
over-strand enters at slot 3 and leaves at slot 1, for sign -1 the other way
around.  An edge id therefore occurs either at no crossing slot (a free
loop) or at exactly one "head" slot and one "tail" slot.

Surgery regions are markers only; they are never resolved here.  Twisting
and belting are pure diagram rewrites returning new values.  One structural
restriction is enforced for tractability: an edge may pass through at most
one region transit in total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional


class DiagramError(ValueError):
    """Schema or consistency violation, with a location-bearing message."""


UP = "up"
DOWN = "down"


@dataclass(frozen=True)
class Crossing:
    edges: tuple[str, str, str, str]
    sign: int

    def mirror(self) -> "Crossing":
        e = self.edges
        if self.sign == 1:
            return Crossing((e[3], e[0], e[1], e[2]), -1)
        return Crossing((e[1], e[2], e[3], e[0]), 1)


@dataclass(frozen=True)
class RegionStrand:
    edge: str
    direction: str  # UP or DOWN


@dataclass(frozen=True)
class SurgeryRegion:
    region_id: str
    strands: tuple[RegionStrand, ...]

    @property
    def strand_count(self) -> int:
        return len(self.strands)

    @property
    def signed_transit(self) -> int:
        return sum(1 if s.direction == UP else -1 for s in self.strands)


class LinkDiagram:
    """Immutable validated planar diagram; all transforms return new values."""

    def __init__(
        self,
        edges: Iterable[str],
        crossings: Iterable[Crossing] = (),
        framing_points: Iterable[tuple[str, int]] = (),
        regions: Iterable[SurgeryRegion] = (),
        orientations: Optional[dict[str, str]] = None,
    ):
        self.edges = tuple(edges)
        self.crossings = tuple(crossings)
        self.framing_points = tuple((str(e), int(w)) for e, w in framing_points)
        self.regions = tuple(regions)
        self.orientations = dict(orientations) if orientations else {e: UP for e in self.edges}
        self._validate()

    # -- validation -------------------------------------------------------

    def _validate(self) -> None:
        edge_set = set(self.edges)
        if len(edge_set) != len(self.edges):
            raise DiagramError("duplicate edge id in edge list")
        heads: dict[str, int] = {e: 0 for e in self.edges}
        tails: dict[str, int] = {e: 0 for e in self.edges}
        for i, c in enumerate(self.crossings):
            if c.sign not in (1, -1):
                raise DiagramError(f"crossing {i}: sign must be +1 or -1, got {c.sign}")
            if len(c.edges) != 4:
                raise DiagramError(f"crossing {i}: needs exactly 4 incident edges")
            for e in c.edges:
                if e not in edge_set:
                    raise DiagramError(f"crossing {i}: unknown edge {e!r}")
            e0, e1, e2, e3 = c.edges
            heads[e0] += 1
            tails[e2] += 1
            if c.sign == 1:
                heads[e3] += 1
                tails[e1] += 1
            else:
                heads[e1] += 1
                tails[e3] += 1
        for e in self.edges:
            if (heads[e], tails[e]) not in ((0, 0), (1, 1)):
                if heads[e] + tails[e] == 1 or heads[e] != tails[e]:
                    raise DiagramError(
                        f"edge {e!r}: dangling or inconsistently oriented "
                        f"(heads={heads[e]}, tails={tails[e]})"
                    )
                raise DiagramError(f"edge {e!r}: appears {heads[e]+tails[e]} times at crossings")
        for e, w in self.framing_points:
            if e not in edge_set:
                raise DiagramError(f"framing point on unknown edge {e!r}")
            if not isinstance(w, int):
                raise DiagramError(f"framing weight on {e!r} must be an integer")
        seen_regions = set()
        transit_edges: set[str] = set()
        for r in self.regions:
            if r.region_id in seen_regions:
                raise DiagramError(f"duplicate region id {r.region_id!r}")
            seen_regions.add(r.region_id)
            for s in r.strands:
                if s.edge not in edge_set:
                    raise DiagramError(f"region {r.region_id!r}: unknown edge {s.edge!r}")
                if s.direction not in (UP, DOWN):
                    raise DiagramError(
                        f"region {r.region_id!r}: direction must be 'up' or 'down'"
                    )
                if s.edge in transit_edges:
                    raise DiagramError(
                        f"edge {s.edge!r} transits more than one region strand slot"
                    )
                transit_edges.add(s.edge)
        for e in self.edges:
            if e not in self.orientations:
                raise DiagramError(f"edge {e!r} missing from orientations")

    # -- derived structure -------------------------------------------------

    @property
    def free_loops(self) -> tuple[str, ...]:
        at_crossings = set()
        for c in self.crossings:
            at_crossings.update(c.edges)
        return tuple(e for e in self.edges if e not in at_crossings)

    def components(self) -> list[frozenset[str]]:
        parent = {e: e for e in self.edges}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for c in self.crossings:
            e0, e1, e2, e3 = c.edges
            union(e0, e2)
            union(e1, e3)
        groups: dict[str, set[str]] = {}
        for e in self.edges:
            groups.setdefault(find(e), set()).add(e)
        return [frozenset(g) for g in sorted(groups.values(), key=lambda g: min(g))]

    @property
    def component_count(self) -> int:
        return len(self.components())

    def region(self, region_id: str) -> SurgeryRegion:
        for r in self.regions:
            if r.region_id == region_id:
                return r
        raise DiagramError(f"unknown region id {region_id!r}")

    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings) + sum(w for _, w in self.framing_points)

    # -- transforms ---------------------------------------------------------

    def mirror(self) -> "LinkDiagram":
        return LinkDiagram(
            self.edges,
            [c.mirror() for c in self.crossings],
            [(e, -w) for e, w in self.framing_points],
            self.regions,
            self.orientations,
        )

    def forget_regions(self) -> "LinkDiagram":
        return LinkDiagram(
            self.edges, self.crossings, self.framing_points, (), self.orientations
        )

    def add_framing_points(self, points: Iterable[tuple[str, int]]) -> "LinkDiagram":
        return LinkDiagram(
            self.edges,
            self.crossings,
            list(self.framing_points) + [(e, int(w)) for e, w in points],
            self.regions,
            self.orientations,
        )

    def _fresh(self, base: str, used: set[str]) -> str:
        i = 0
        while f"{base}#{i}" in used:
            i += 1
        name = f"{base}#{i}"
        used.add(name)
        return name

    def insert_full_twists(self, region_id: str, k: int) -> "LinkDiagram":
        """Replace region `region_id` by k positive full twists on its strands.

        Adds k*l*(l-1) crossings (signs follow strand orientations); the
        region marker is consumed.  Purely diagrammatic: framing points are
        not touched (see projector.approximate_projector for the framed
        variant used in homology pipelines).
        """
        if k < 0:
            raise DiagramError("twist count must be nonnegative")
        reg = self.region(region_id)
        rest_regions = tuple(r for r in self.regions if r.region_id != region_id)
        ell = reg.strand_count
        if k == 0 or ell <= 1:
            return LinkDiagram(
                self.edges, self.crossings, self.framing_points, rest_regions, self.orientations
            )

        used = set(self.edges)
        free = set(self.free_loops)
        # Head slots of each transit edge, so the top stub can be rewired.
        head_slot: dict[str, tuple[int, int]] = {}
        for ci, c in enumerate(self.crossings):
            e0, e1, e2, e3 = c.edges
            head_slot[e0] = (ci, 0)
            head_slot[e3 if c.sign == 1 else e1] = (ci, 3 if c.sign == 1 else 1)

        # Current segment and direction at each braid position.
        cur = [s.edge for s in reg.strands]
        dirs = [1 if s.direction == UP else -1 for s in reg.strands]
        strand_dir = list(dirs)
        new_crossings: list[Crossing] = []
        new_orient = dict(self.orientations)

        def braid_generator(p: int) -> None:
            a, b = cur[p], cur[p + 1]
            da, db = strand_dir[p], strand_dir[p + 1]
            c_seg = self._fresh("tw", used)
            d_seg = self._fresh("tw", used)
            new_orient[c_seg] = UP if db == 1 else DOWN
            new_orient[d_seg] = UP if da == 1 else DOWN
            # Left segment goes over: over-path a--d, under-path b--c.
            if db == 1:
                new_crossings.append(Crossing((b, d_seg, c_seg, a), 1 if da == 1 else -1))
            else:
                new_crossings.append(Crossing((c_seg, a, b, d_seg), 1 if da == -1 else -1))
            cur[p], cur[p + 1] = c_seg, d_seg
            strand_dir[p], strand_dir[p + 1] = db, da

        for _ in range(k * ell):
            for p in range(ell - 1):
                braid_generator(p)

        # Glue top exits back to the outside of the diagram.
        #  - free-loop transit: the outside arc is the bottom segment itself;
        #  - up strand through crossings: top piece gets a fresh id at the
        #    old edge's head slot;
        #  - down strand: the cut is traversed top-to-bottom, so the original
        #    id stays on the piece holding the tail slot (the top), and the
        #    bottom entry should have used a fresh id.  Rather than thread
        #    that through the braid, run the braid on the original ids and
        #    substitute afterwards; the substitution is a bijection on the
        #    braid-local occurrences.
        subst: dict[str, str] = {}
        crossing_rewires: list[tuple[int, int, str]] = []
        for i, s in enumerate(reg.strands):
            e = s.edge
            top = cur[i]
            if e in free:
                subst[top] = e
            elif s.direction == UP:
                if top == e:
                    continue  # strand untouched by any crossing
                stub = self._fresh(e, used)
                new_orient[stub] = self.orientations[e]
                subst[top] = stub
                ci, slot = head_slot[e]
                crossing_rewires.append((ci, slot, stub))
            else:
                # Downward strand: original id belongs above the braid.  The
                # braid consumed `e` at the bottom; rename that bottom piece.
                renamed = []
                done = False
                stub = self._fresh(e, used)
                for c in new_crossings:
                    if not done and e in c.edges:
                        renamed.append(
                            Crossing(
                                tuple(stub if x == e else x for x in c.edges), c.sign
                            )
                        )
                        done = True
                    else:
                        renamed.append(c)
                if not done:
                    continue  # strand untouched by any crossing
                new_crossings = renamed
                new_orient[stub] = self.orientations[e]
                subst[top] = e
                ci, slot = head_slot[e]
                crossing_rewires.append((ci, slot, stub))

        new_crossings = [
            Crossing(tuple(subst.get(x, x) for x in c.edges), c.sign) for c in new_crossings
        ]
        old_crossings = list(self.crossings)
        for ci, slot, stub in crossing_rewires:
            e = list(old_crossings[ci].edges)
            e[slot] = stub
            old_crossings[ci] = Crossing(tuple(e), old_crossings[ci].sign)

        referenced = {x for c in old_crossings + new_crossings for x in c.edges}
        all_edges = list(self.edges)
        for e in sorted(used - set(self.edges)):
            if e in referenced:
                all_edges.append(e)
        for e in all_edges:
            new_orient.setdefault(e, UP)
        # Framing points stay on their (possibly bottom-piece) edges.
        fps = [(subst.get(e, e), w) for e, w in self.framing_points]
        return LinkDiagram(all_edges, old_crossings + new_crossings, fps, rest_regions, new_orient)

    def add_belts(self, region_id: str, up: int, down: int) -> "LinkDiagram":
        """Append up+down parallel circles through region `region_id`.

        Each belt is a crossingless closed edge transiting the region once;
        they are recorded at the end of the region's strand list, upward
        belts first.
        """
        if up < 0 or down < 0:
            raise DiagramError("belt counts must be nonnegative")
        reg = self.region(region_id)
        used = set(self.edges)
        new_edges = []
        new_strands = list(reg.strands)
        orient = dict(self.orientations)
        for _ in range(up):
            e = self._fresh(f"belt{region_id}", used)
            new_edges.append(e)
            new_strands.append(RegionStrand(e, UP))
            orient[e] = UP
        for _ in range(down):
            e = self._fresh(f"belt{region_id}", used)
            new_edges.append(e)
            new_strands.append(RegionStrand(e, DOWN))
            orient[e] = DOWN
        regions = tuple(
            SurgeryRegion(r.region_id, tuple(new_strands)) if r.region_id == region_id else r
            for r in self.regions
        )
        return LinkDiagram(
            list(self.edges) + new_edges, self.crossings, self.framing_points, regions, orient
        )

    def relabeled(self, prefix: str) -> "LinkDiagram":
        m = {e: f"{prefix}{e}" for e in self.edges}
        return LinkDiagram(
            [m[e] for e in self.edges],
            [Crossing(tuple(m[x] for x in c.edges), c.sign) for c in self.crossings],
            [(m[e], w) for e, w in self.framing_points],
            [
                SurgeryRegion(
                    f"{prefix}{r.region_id}",
                    tuple(RegionStrand(m[s.edge], s.direction) for s in r.strands),
                )
                for r in self.regions
            ],
            {m[e]: t for e, t in self.orientations.items()},
        )

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        a, b = self, other
        if set(a.edges) & set(b.edges) or {r.region_id for r in a.regions} & {
            r.region_id for r in b.regions
        }:
            b = b.relabeled("r.")
        return LinkDiagram(
            list(a.edges) + list(b.edges),
            list(a.crossings) + list(b.crossings),
            list(a.framing_points) + list(b.framing_points),
            list(a.regions) + list(b.regions),
            {**a.orientations, **b.orientations},
        )

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "edges": list(self.edges),
            "crossings": [{"e": list(c.edges), "sign": c.sign} for c in self.crossings],
            "framing_points": [[e, w] for e, w in self.framing_points],
            "regions": [
                {
                    "id": r.region_id,
                    "strands": [{"edge": s.edge, "dir": s.direction} for s in r.strands],
                }
                for r in self.regions
            ],
            "orientations": dict(self.orientations),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)


def parse_diagram(text: str) -> LinkDiagram:
    """Parse and validate a diagram from its JSON file contents."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DiagramError("diagram file must contain a JSON object")
    for key in ("edges", "crossings", "framing_points", "regions", "orientations"):
        if key not in obj:
            raise DiagramError(f"missing field {key!r}")
    edges = obj["edges"]
    if not isinstance(edges, list) or not all(isinstance(e, str) for e in edges):
        raise DiagramError("'edges' must be a list of string ids")
    crossings = []
    for i, c in enumerate(obj["crossings"]):
        if not isinstance(c, dict) or "e" not in c or "sign" not in c:
            raise DiagramError(f"crossing {i}: must be an object with 'e' and 'sign'")
        if not isinstance(c["e"], list) or len(c["e"]) != 4:
            raise DiagramError(f"crossing {i}: 'e' must list 4 edge ids")
        crossings.append(Crossing(tuple(str(x) for x in c["e"]), int(c["sign"])))
    fps = []
    for i, p in enumerate(obj["framing_points"]):
        if not isinstance(p, list) or len(p) != 2:
            raise DiagramError(f"framing point {i}: must be a [edge, weight] pair")
        e, w = p
        if isinstance(w, float) and not w.is_integer():
            raise DiagramError(f"framing point {i}: half-integer framing points are rejected")
        if not isinstance(w, int):
            raise DiagramError(f"framing point {i}: weight must be an integer")
        fps.append((str(e), w))
    regions = []
    for i, r in enumerate(obj["regions"]):
        if not isinstance(r, dict) or "id" not in r or "strands" not in r:
            raise DiagramError(f"region {i}: must be an object with 'id' and 'strands'")
        strands = []
        for j, s in enumerate(r["strands"]):
            if not isinstance(s, dict) or "edge" not in s or "dir" not in s:
                raise DiagramError(f"region {i} strand {j}: needs 'edge' and 'dir'")
            strands.append(RegionStrand(str(s["edge"]), str(s["dir"])))
        regions.append(SurgeryRegion(str(r["id"]), tuple(strands)))
    orientations = obj["orientations"]
    if not isinstance(orientations, dict):
        raise DiagramError("'orientations' must map edges to direction tags")
    return LinkDiagram(edges, crossings, fps, regions, orientations)
