import pytest

from lasagna import catalog
from lasagna.gradings import DimTable, Grading, Window
from lasagna.skein import (
    HandlebodySpec,
    LasagnaError,
    belt_capping_class,
    build_stage,
    s02_dims,
    transition_down,
)

FIXTURE_WINDOW = Window(h2_lo=-4, h2_hi=4, q2_lo=-12, q2_hi=0)


def test_stage_bookkeeping():
    spec = HandlebodySpec(catalog.empty_surgery(1), (0,))
    st0 = build_stage(spec, 0)
    st2 = build_stage(spec, 2)
    assert st0.q2_shift == 0
    assert st2.q2_shift == -8  # -2 * (||n|| + 2r)
    assert st2.diagram.component_count == 4
    spec1 = HandlebodySpec(catalog.empty_surgery(1), (1,))
    st1 = build_stage(spec1, 1)
    assert st1.q2_shift == -2 * (1 + 2)
    assert st1.diagram.component_count == 3


def test_stage_writhe_is_stage_independent():
    spec = HandlebodySpec(catalog.belt_link(2), (0,))
    w = [build_stage(spec, r).diagram.writhe() for r in range(2)]
    assert w[0] == w[1]


def test_s02_d2s2_alpha0():
    spec = HandlebodySpec(catalog.empty_surgery(1), (0,))
    res = s02_dims(spec, FIXTURE_WINDOW, r_max=3)
    assert res.table == DimTable({(0, 0): 1, (0, -4): 1, (0, -8): 1, (0, -12): 1})
    assert all(g.h2 == 0 for g in res.table)


def test_s02_d2s2_alpha1():
    spec = HandlebodySpec(catalog.empty_surgery(1), (1,))
    res = s02_dims(spec, FIXTURE_WINDOW, r_max=3)
    assert res.table == DimTable({(0, 0): 1, (0, -4): 1, (0, -8): 1, (0, -12): 1})


def test_s02_odd_class_zero():
    spec = HandlebodySpec(catalog.belt_link(1), (0,))
    res = s02_dims(spec, FIXTURE_WINDOW, r_max=2)
    assert res.zero and res.table == DimTable()


def test_transitions_injective_on_window():
    # for the empty boundary link the annulus maps are injective on the
    # symmetrized stages: one-step image ranks equal the source dims
    spec = HandlebodySpec(catalog.empty_surgery(1), (0,))
    res = s02_dims(spec, Window(h2_lo=0, h2_hi=0, q2_lo=-8, q2_hi=0), r_max=3)
    for g, dim in res.table.items():
        if res.stable[g]:
            assert dim >= 1
    # stage dims grow towards the colimit but never shrink on the window
    for earlier, later in zip(res.stages[1:-1], res.stages[2:]):
        for g, v in earlier.items():
            assert later[g] >= v


def test_quantum_shift_bookkeeping_unit():
    # the generator of stage r sits 2r quantum levels lower before shifting
    spec = HandlebodySpec(catalog.empty_surgery(1), (0,))
    st1 = build_stage(spec, 1)
    from lasagna.skein import _classical_to_global

    g = _classical_to_global(0, -4, st1)  # x (x) x class of the 2-belt stage
    assert g == Grading(0, -8)


def test_guard_rejects_large_cables():
    spec = HandlebodySpec(catalog.empty_surgery(2), (0, 0))
    with pytest.raises(LasagnaError, match="guard"):
        s02_dims(spec, FIXTURE_WINDOW, r_max=3, guard_strands=6)


def test_capping_certificates():
    assert belt_capping_class(HandlebodySpec(catalog.empty_surgery(1), (0,))).survives
    cert1 = belt_capping_class(HandlebodySpec(catalog.belt_link(1), (0,)))
    assert not cert1.survives
    cert2 = belt_capping_class(HandlebodySpec(catalog.belt_link(2), (0,)))
    assert cert2.survives
    assert cert2.grading == Grading(0, -4)


def test_capping_requires_belt_link():
    from lasagna.diagram import LinkDiagram, RegionStrand, SurgeryRegion

    d = catalog.trefoil_right()
    with_region = LinkDiagram(
        d.edges,
        d.crossings,
        d.framing_points,
        [SurgeryRegion("1", (RegionStrand("s0", "up"), RegionStrand("e1", "up")))],
        d.orientations,
    )
    with pytest.raises(LasagnaError, match="belt"):
        belt_capping_class(HandlebodySpec(with_region, ()))


def test_transition_one_step_ranks_injective():
    # rank of each one-step symmetrized transition equals the source stage
    # dims inside the window: the maps are injective there
    from lasagna.skein import _composite_rank, _Symmetrizer, transition_down, _block_matrix_on_homology

    spec = HandlebodySpec(catalog.empty_surgery(1), (0,))
    window = Window(h2_lo=0, h2_hi=0, q2_lo=-8, q2_hi=0)
    res = s02_dims(spec, window, r_max=3)
    stages = [build_stage(spec, r) for r in range(4)]
    syms = [_Symmetrizer(st) for st in stages]
    Hs = [st.cube.homology_basis() for st in stages]
    mats = []
    for r in range(3):
        F = transition_down(spec, stages[r + 1], stages[r])
        mats.append(_block_matrix_on_homology(
            F, syms[r + 1], syms[r], Hs[r + 1], Hs[r], lambda k: (k[0], k[1] - 4)))
    for r in range(3):
        for g, dim in res.stages[r].items():
            rank = _composite_rank(g, stages, Hs, mats, r, r + 1)
            assert rank == dim, (r, str(g))
