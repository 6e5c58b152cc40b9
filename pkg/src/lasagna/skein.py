"""Graded dimensions of skein lasagna modules of 2-handlebodies.

The module of a 2-handlebody with boundary link L is the filtered colimit,
over the number r of added belt pairs per 2-handle, of the symmetrized gl2
homologies of the cable diagrams L with (n_+ + r, n_- + r) meridian circles
around each surgery region, with an overall quantum shift -||n|| - 2||r||;
the transition maps are symmetrized dotted annulus cobordism maps creating
one oppositely-oriented belt pair.

Everything is computed in the classical model and reindexed: a stage-r
class at classical (h, q) sits at global grading
    (-h,  q - w - ||n|| - 2||r||)
with w the (stage-independent) writhe of the cable diagram, and the
transition in the colimit direction is the linear dual of the classical
annulus-annihilation map from stage r+1 down to stage r (merge the newest
belt pair by a saddle, dot, kill the resulting circle).  Reported colimit
dimensions are the ranks of the last transition, flagged stable when the
previous transition already had the same rank.

Desk-scale guard: one handlebody component, few regions, small cables; the
boundary link's transit strands must be crossingless circles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import catalog
from .cobmaps import (
    ChainMap,
    birth_diagram,
    death_map,
    dot_map,
    reduction_equivalence,
    saddle_diagram,
    saddle_map,
)
from .densecube import Cube, _acc
from .diagram import LinkDiagram
from .gradings import DimTable, Grading, Window
from .linalg import Echelon, row_reduce, solve_in_span


class LasagnaError(ValueError):
    pass


@dataclass(frozen=True)
class HandlebodySpec:
    """A 2-handlebody presented by its boundary diagram's surgery regions."""

    boundary: LinkDiagram
    offset: tuple[int, ...] = ()  # skein class offset n per region

    def normalized_offset(self) -> tuple[int, ...]:
        m = len(self.boundary.regions)
        n = tuple(self.offset) + (0,) * (m - len(self.offset))
        if len(n) != m:
            raise LasagnaError("offset vector longer than the number of regions")
        return n


@dataclass
class ColimitStage:
    r: int
    diagram: LinkDiagram
    cube: Cube
    belt_groups: dict  # region id -> list of belt edge groups (innermost first)
    newest_pair: dict  # region id -> (up group, down group) added at this stage
    q2_shift: int  # doubled global shift -2(||n|| + 2||r||)


@dataclass
class LasagnaResult:
    table: DimTable
    window: Window
    stages: list
    stable: dict  # Grading -> bool
    zero: bool = False

    def to_json_obj(self) -> dict:
        return {
            "dims": self.table.to_json_obj(),
            "window": str(self.window),
            "stage_dims": [t.to_json_obj() for t in self.stages],
            "stable": {str(g): bool(v) for g, v in self.stable.items()},
            "zero": self.zero,
        }


def _two_divisible(d: LinkDiagram) -> bool:
    return all(r.signed_transit % 2 == 0 for r in d.regions)


def build_stage(spec: HandlebodySpec, r: int, guard_strands: int = 8) -> ColimitStage:
    d = spec.boundary
    n = spec.normalized_offset()
    total = 0
    stage = d
    belt_groups: dict = {}
    newest: dict = {}
    for j, reg in enumerate(d.regions):
        a = max(n[j], 0) + r
        b = max(-n[j], 0) + r
        total += a + b
        stage, groups = catalog.encircle(stage, reg.region_id, a, b)
        belt_groups[reg.region_id] = groups
        if r > 0:
            # newest pair: outermost up-belt and innermost down-belt
            newest[reg.region_id] = (groups[a - 1], groups[a])
    if total > guard_strands:
        raise LasagnaError(
            f"stage cable of {total} belts exceeds the desk-scale guard "
            f"({guard_strands}); pass a larger guard to opt in"
        )
    assert not stage.regions
    norm = sum(abs(x) for x in n) + 2 * r * len(d.regions)
    return ColimitStage(r, stage, Cube(stage), belt_groups, newest, -2 * norm)


def _global_to_classical(g: Grading, stage: ColimitStage) -> tuple[int, int]:
    w = stage.diagram.writhe()
    return (-g.h2, g.q2 + 2 * w - stage.q2_shift)


def _classical_to_global(h2: int, q2: int, stage: ColimitStage) -> Grading:
    w = stage.diagram.writhe()
    return Grading(-h2, q2 - 2 * w + stage.q2_shift)


def _permutation_chain_map(cube: Cube, groups: list, perm: tuple) -> ChainMap:
    """Permute belt circles by transporting labels along crossed tubes.

    Works per state; a permuted belt whose circle coincides with another
    belt's circle or is merged with strand circles is left in place (the
    transported label pattern is then unchanged).  The result is checked to
    be a chain map by the caller once per cube.
    """
    entries = {}
    for gen in cube.generators():
        s, labels = gen
        circles = cube.circles[s]
        idx = []
        ok = True
        for grp in groups:
            found = {i for i, c in enumerate(circles) if any(e in c for e in grp)}
            if len(found) != 1:
                ok = False
                break
            idx.append(found.pop())
        if ok and len(set(idx)) == len(idx):
            nl = list(labels)
            for a, b in enumerate(perm):
                nl[idx[b]] = labels[idx[a]]
            entries[gen] = {(s, tuple(nl)): Fraction(1)}
        else:
            entries[gen] = {gen: Fraction(1)}
    return ChainMap(cube, cube, entries)


class _Symmetrizer:
    """Average of all belt permutations per region, on homology."""

    def __init__(self, stage: ColimitStage, check: bool = True):
        import itertools

        self.maps = []
        cube = stage.cube
        for reg_id, groups in stage.belt_groups.items():
            k = len(groups)
            if k <= 1:
                continue
            perms = list(itertools.permutations(range(k)))
            pm = []
            for p in perms:
                f = _permutation_chain_map(cube, groups, p)
                pm.append(f)
            if check and not pm[-1].is_chain_map():
                raise LasagnaError(
                    f"belt permutation is not a chain map for region {reg_id}"
                )
            self.maps.append(pm)

    def apply(self, vec: dict) -> dict:
        out = dict(vec)
        for pm in self.maps:
            acc: dict = {}
            for f in pm:
                for k, v in f.apply(out).items():
                    _acc(acc, k, v)
            out = {k: v / len(pm) for k, v in acc.items()}
        return out


def transition_down(spec: HandlebodySpec, hi: ColimitStage, lo: ColimitStage) -> ChainMap:
    """Classical annulus-annihilation map C(stage r+1) -> C(stage r).

    Merge each region's newest belt pair with a saddle, dot the merged
    circle, and kill it; if the intermediate circle still crosses strands,
    the identification with the lower stage goes through the reduced models.
    """
    cur_diagram = hi.diagram
    cur_cube = hi.cube
    composite: Optional[ChainMap] = None

    def push(f: ChainMap):
        nonlocal composite
        composite = f if composite is None else composite.compose(f)

    for reg_id, (grp_up, grp_down) in hi.newest_pair.items():
        e_up, e_down = grp_up[0], grp_down[0]
        d2 = saddle_diagram(cur_diagram, e_up, e_down)
        cube2 = Cube(d2)
        push(saddle_map(cur_cube, cube2, e_up, e_down))
        cur_diagram, cur_cube = d2, cube2
        merged = e_up if e_up in d2.edges else e_down
        push(dot_map(cur_cube, merged))
        if merged in cur_diagram.free_loops:
            d3 = _death(cur_diagram, merged)
            cube3 = Cube(d3)
            push(death_map(cur_cube, cube3, merged))
            cur_diagram, cur_cube = d3, cube3
        else:
            # the merged curve still winds through the strands: pass through
            # the reduced models to the split configuration, then kill it
            split = birth_diagram(lo.diagram, "annih")
            cube_split = Cube(split)
            push(reduction_equivalence(cur_cube, cube_split))
            d3 = lo.diagram
            push(death_map(cube_split, Cube(d3), "annih"))
            cur_diagram, cur_cube = d3, Cube(d3)
    # identify leftover edge names with the lower stage
    if set(cur_diagram.edges) != set(lo.diagram.edges):
        push(_rename_map(cur_cube, lo.cube))
        cur_diagram, cur_cube = lo.diagram, lo.cube
    assert composite is not None
    return composite


def _death(d: LinkDiagram, edge: str) -> LinkDiagram:
    from .cobmaps import death_diagram

    return death_diagram(d, edge)


def _rename_map(src: Cube, dst: Cube) -> ChainMap:
    """Identity map between cubes of equal diagrams up to edge names.

    Only supported for crossingless unlinks, where circles are single edges
    and the bijection follows the canonical circle order.
    """
    if src.n or dst.n:
        raise LasagnaError("edge renaming only supported for crossingless stages")
    src_c = src.circles[0]
    dst_c = dst.circles[0]
    if len(src_c) != len(dst_c):
        raise LasagnaError("stage identification failed: circle counts differ")
    entries = {}
    for gen in src.generators():
        s, labels = gen
        entries[gen] = {(0, labels): Fraction(1)}
    return ChainMap(src, dst, entries)


def _block_matrix_on_homology(F: ChainMap, sym_src, sym_dst, H_src, H_dst, key_map):
    """Matrices of sym_dst . F . sym_src between homology blocks."""
    out = {}
    for key, (reps, _img) in H_src.items():
        if not reps:
            continue
        tkey = key_map(key)
        treps, timg = H_dst.get(tkey, ([], Echelon()))
        cols = []
        for v in reps:
            vec = sym_src.apply(v)
            vec = F.apply(vec)
            vec = sym_dst.apply(vec)
            red = timg.reduce(vec)
            if not red:
                cols.append([Fraction(0)] * len(treps))
                continue
            reduced_treps = [timg.reduce(t) for t in treps]
            sol = solve_in_span(reduced_treps, red)
            if sol is None:
                raise AssertionError("transition image not recognized in target homology")
            cols.append(sol)
        out[key] = cols
    return out


def s02_dims(
    spec: HandlebodySpec,
    window: Window,
    r_max: int = 3,
    guard_strands: int = 8,
) -> LasagnaResult:
    """Colimit dimensions of the skein lasagna module at the given offset."""
    d = spec.boundary
    if not d.regions:
        raise LasagnaError("a 2-handlebody needs at least one surgery region")
    if not _two_divisible(d):
        # the boundary link's class fails 2-divisibility: the module vanishes
        return LasagnaResult(DimTable(), window, [], {}, zero=True)
    n = spec.normalized_offset()
    if r_max < 2:
        raise LasagnaError("r_max must be at least 2 to report stabilization")
    stages = [build_stage(spec, r, guard_strands) for r in range(r_max + 1)]
    syms = [_Symmetrizer(st) for st in stages]
    Hs = [st.cube.homology_basis() for st in stages]
    stage_tables = []
    for st, H, sym in zip(stages, Hs, syms):
        t = DimTable()
        for (h2, q2), (reps, img) in H.items():
            if not reps:
                continue
            g = _classical_to_global(h2, q2, st)
            if not window.contains(g):
                continue
            reduced = [img.reduce(r_) for r_ in reps]
            cols = []
            for v in reps:
                red = img.reduce(sym.apply(v))
                sol = solve_in_span(reduced, red) if red else None
                cols.append({} if sol is None else {i: c for i, c in enumerate(sol) if c})
            rank = len(row_reduce(cols))
            if rank:
                t.add(g, rank)
        stage_tables.append(t)
    # transitions down: M[r]: H(stage r+1) -> H(stage r), symmetrized
    mats = []
    for r in range(r_max):
        F = transition_down(spec, stages[r + 1], stages[r])
        key_map = lambda key: (key[0], key[1] - 4)
        mats.append(
            _block_matrix_on_homology(
                F, syms[r + 1], syms[r], Hs[r + 1], Hs[r], key_map
            )
        )
    table = DimTable()
    stable = {}
    gradings = set()
    for st, t in zip(stages, stage_tables):
        for g in t:
            gradings.add(g)
    for g in sorted(gradings):
        if not window.contains(g):
            continue
        last = _composite_rank(g, stages, Hs, mats, r_max - 1, r_max)
        prev = _composite_rank(g, stages, Hs, mats, r_max - 2, r_max - 1)
        if last:
            table.add(g, last)
        # a class that could not exist before stage r_max-1 is fresh, not
        # unstable; anything already visible must keep its image rank
        fresh = prev == 0 and stage_tables[r_max - 2][g] == 0
        stable[g] = (prev == last) or fresh
    return LasagnaResult(table, window, stage_tables, stable)


def _composite_rank(g, stages, Hs, mats, r_lo, r_hi) -> int:
    """Rank at global grading g of the colimit map W_{r_lo} -> W_{r_hi}.

    Equals the rank of the composed symmetrized annihilation matrices from
    stage r_hi down to r_lo, restricted to the block of g.
    """
    key = _global_to_classical(g, stages[r_hi])
    if key not in Hs[r_hi] or not Hs[r_hi][key][0]:
        return 0
    dim_hi = len(Hs[r_hi][key][0])
    cols = [
        {i: Fraction(1) if i == j else Fraction(0) for i in range(dim_hi)}
        for j in range(dim_hi)
    ]
    cols = [{k: v for k, v in c.items() if v} for c in cols]
    cur_key = key
    for r in range(r_hi - 1, r_lo - 1, -1):
        block = mats[r].get(cur_key)
        tgt_key = (cur_key[0], cur_key[1] - 4)
        tgt_dim = len(Hs[r].get(tgt_key, ([], None))[0])
        new_cols = []
        for c in cols:
            acc = [Fraction(0)] * tgt_dim
            for src_i, v in c.items():
                if block is None:
                    continue
                col = block[src_i]
                for k in range(tgt_dim):
                    acc[k] += v * col[k]
            new_cols.append({k: x for k, x in enumerate(acc) if x})
        cols = new_cols
        cur_key = tgt_key
    return len(row_reduce(cols))


@dataclass
class CappingCertificate:
    grading: Grading
    survives: bool
    stage_checked: int
    image_nonzero: bool


def belt_capping_class(spec: HandlebodySpec, guard_strands: int = 6) -> CappingCertificate:
    """Certify the class of the standard capping at (0, -#strands).

    The all-units class of the belt link's stage-0 homology is traced
    through the first symmetrized transition; the certificate records
    whether its image is nonzero (dually: whether the all-x classical
    coordinate row of the annihilation matrix survives symmetrization).
    """
    d = spec.boundary
    free = set(d.free_loops)
    for r in d.regions:
        for s in r.strands:
            if s.edge not in free:
                raise LasagnaError("belt capping expects a standard belt link")
    if not _two_divisible(d):
        return CappingCertificate(Grading(0, 0), False, 0, False)
    ell = sum(r.strand_count for r in d.regions)
    grading = Grading(0, -2 * ell)
    stages = [build_stage(spec, 0, guard_strands), build_stage(spec, 1, guard_strands)]
    if ell == 0:
        return CappingCertificate(Grading(0, 0), True, 0, True)
    syms = [_Symmetrizer(st) for st in stages]
    Hs = [st.cube.homology_basis() for st in stages]
    F = transition_down(spec, stages[1], stages[0])
    key_map = lambda key: (key[0], key[1] - 4)
    mats = _block_matrix_on_homology(F, syms[1], syms[0], Hs[1], Hs[0], key_map)
    # classical block of the target grading in stage 0 and the all-x row
    key0 = _global_to_classical(grading, stages[0])
    src_key = (key0[0], key0[1] + 4)
    reps0, img0 = Hs[0].get(key0, ([], None))
    if not reps0:
        return CappingCertificate(grading, False, 1, False)
    allx = _all_x_coordinate(stages[0].cube, reps0, img0)
    block = mats.get(src_key)
    nonzero = False
    if block is not None and allx is not None:
        for col in block:
            val = sum(col[i] * allx.get(i, Fraction(0)) for i in range(len(reps0)))
            if val:
                nonzero = True
    return CappingCertificate(grading, nonzero, 1, nonzero)


def _all_x_coordinate(cube: Cube, reps, img):
    """Coordinates of the all-x generator class in the given representatives."""
    state = 0
    k = len(cube.circles[state])
    target = {(state, tuple([1] * k)): Fraction(1)}
    red = img.reduce(target)
    reduced_reps = [img.reduce(r) for r in reps]
    sol = solve_in_span(reduced_reps, red)
    if sol is None:
        return None
    return {i: v for i, v in enumerate(sol) if v}
