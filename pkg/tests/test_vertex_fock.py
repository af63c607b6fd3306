"""Realized-generator checks: vertex mechanics, table sweeps, charge fits."""

from __future__ import annotations

import functools
import time

import pytest

from curralg.lie_core import build_su
from curralg.wick_currents import measure_level, measure_k1_k2
from curralg.vertex_fock import (
    VACUUM_QP,
    BoundaryError,
    RealizedGenerators,
    TruncationSpec,
    VertexSpace,
    boundary_probe_keys,
    build_vertex,
    check_table_numeric,
    default_charges,
    default_probe_keys,
    measure_c1_c2,
    measure_cubic_coefficient,
    measure_vertex_level,
    p_slot_key,
    q_slot_key,
    stage_deviations,
    total_level,
)

SU2 = build_su(2)
DEFAULT = TruncationSpec(N=2, L=4, P=2, M=2, current_cap=3)

PHI1 = ((("phi", 1), False, 0), 1)
PHI2 = ((("phi", 2), False, 0), 1)


@functools.lru_cache(maxsize=None)
def _space(spec: TruncationSpec = DEFAULT) -> VertexSpace:
    return VertexSpace(SU2, spec)


@functools.lru_cache(maxsize=None)
def _gens(spec: TruncationSpec = DEFAULT, include_T: bool = True) -> RealizedGenerators:
    return RealizedGenerators(_space(spec), include_T=include_T)


@functools.lru_cache(maxsize=None)
def _charges(spec: TruncationSpec = DEFAULT) -> tuple:
    ch = default_charges(_space(spec), include_c=True)
    return tuple(sorted(ch.items()))


def _merge(dst: dict, src: dict, factor=1) -> dict:
    for key, amp in src.items():
        new = dst.get(key, 0) + amp * factor
        if new == 0:
            dst.pop(key, None)
        else:
            dst[key] = new
    return dst


def _dist(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys), default=0.0)


# -- truncation spec ---------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        TruncationSpec(N=0)
    with pytest.raises(ValueError):
        TruncationSpec(L=0)
    with pytest.raises(ValueError):
        TruncationSpec(P=0)
    with pytest.raises(ValueError):
        TruncationSpec(M=0)
    with pytest.raises(ValueError):
        TruncationSpec(current_cap=1)


def test_scaled_stage_grows_every_biting_cutoff():
    assert DEFAULT.scaled_stage() == TruncationSpec(N=2, L=6, P=3, M=2, current_cap=5)


# -- vertex mode basics -------------------------------------------------------


def test_vertex_at_zero_momentum():
    space = _space()
    zero = (0, 0)
    ident = build_vertex(zero, 0, space)
    probe = (p_slot_key(1), (1, 0), (PHI1,))
    assert ident.column(probe) == {probe: 1}
    for mode in (-2, -1, 1, 2):
        assert build_vertex(zero, mode, space).column(probe) == {}


def test_vertex_zero_mode_shifts_vacuum():
    space = _space()
    m = (1, -1)
    op = build_vertex(m, 0, space)
    vac = space.vacuum_key()
    shifted = space.vacuum_key(m)
    assert op.matrix_element(shifted, vac) == 1
    col = op.column(vac)
    assert col[shifted] == 1
    assert all(key[1] == m for key in col)


def test_vertex_creator_mode_on_vacuum():
    # (V_m)_{-1}|0> = i m_mu q^mu_{-1}|m>; positive modes annihilate.
    space = _space()
    m = (1, -1)
    vac = space.vacuum_key()
    col = build_vertex(m, -1, space).column(vac)
    want = {
        (q_slot_key(1), m, ()): 1j * m[0],
        (q_slot_key(2), m, ()): 1j * m[1],
    }
    assert _dist(col, want) == 0
    assert build_vertex(m, 1, space).column(vac) == {}
    assert build_vertex(m, 2, space).column(vac) == {}


def test_vertex_momentum_window_enforced():
    space = _space()
    with pytest.raises(BoundaryError):
        build_vertex((3, 0), 0, space)


def test_vertex_elements_stable_under_level_growth():
    # Exact per-state expansion: growing L cannot move any element between
    # low-level states.
    small = _space()
    big = _space(TruncationSpec(N=2, L=6, P=2, M=2, current_cap=3))
    m = (1, 0)
    probes = [
        small.vacuum_key(),
        (p_slot_key(1), (0, 0), ()),
        (q_slot_key(2), (0, 0), ()),
    ]
    for mode in (-2, -1, 0, 1):
        op_s = build_vertex(m, mode, small)
        op_b = build_vertex(m, mode, big)
        for probe in probes:
            col_s = {k: v for k, v in op_s.column(probe).items() if total_level(k) <= 1}
            col_b = {k: v for k, v in op_b.column(probe).items() if total_level(k) <= 1}
            assert _dist(col_s, col_b) < 1e-10


# -- realized generator structure ---------------------------------------------


def _generator_labels(gens):
    out = []
    for species in ("J", "G", "H", "S1", "L"):
        out.extend(gens.labels((species,)))
    return out


def test_all_generators_preserve_total_level():
    gens = _gens()
    momenta = ((1, 0), (0, -1), (1, 1))
    probes = default_probe_keys(_space())
    for label in _generator_labels(gens):
        for m in momenta:
            op = gens.operator(label, m)
            for probe in probes:
                for key in op.column(probe):
                    assert total_level(key) == total_level(probe), (label, m, probe)


def test_realized_currents_annihilate_vacuum():
    gens = _gens()
    space = _space()
    for label in gens.labels(("J", "G", "H")):
        for m in ((0, 0), (1, 0), (0, 1), (1, -1)):
            for w in ((0, 0), (1, 0)):
                assert gens.operator(label, m).column(space.vacuum_key(w)) == {}


def test_one_chain_closedness_matrix_identity():
    # (m)_rho S1^rho(m) = 0 on every probe, and S1 at zero argument is zero.
    gens = _gens()
    for m in ((1, 0), (0, 1), (1, -1), (2, 1)):
        for probe in default_probe_keys(_space()):
            acc: dict = {}
            for rho in (1, 2):
                if m[rho - 1]:
                    _merge(acc, gens.operator(("S1", rho), m).column(probe), m[rho - 1])
            assert _dist(acc, {}) == 0
    for rho in (1, 2):
        op = gens.operator(("S1", rho), (0, 0))
        for probe in default_probe_keys(_space()):
            assert op.column(probe) == {}


def test_current_bracket_f_channel():
    # [Jcal^1(m), Jcal^2(n)] = f^{12c} Jcal^c(m+n) away from the diagonal.
    gens = _gens()
    m, n = (1, 0), (0, 1)
    r = (1, 1)
    probe = (p_slot_key(1), (0, 0), (PHI1,))
    got = gens.operator(("J", 1), m).commutator_column(gens.operator(("J", 2), n), probe)
    want: dict = {}
    for c in (1, 2, 3):
        coeff = complex(SU2.f_at(1, 2, c))
        if coeff:
            _merge(want, gens.operator(("J", c), r).column(probe), coeff)
    assert _dist(got, want) < 1e-12


def test_l_s1_bracket_matches_module_action():
    # [L_mu(m), S1^nu(n)] = n_mu S1^nu(m+n) + delta^nu_mu m_rho S1^rho(m+n)
    gens = _gens()
    m, n = (1, 0), (0, 1)
    r = (1, 1)
    for mu in (1, 2):
        for nu in (1, 2):
            for probe in (
                (p_slot_key(1), (0, 0), ()),
                (p_slot_key(2), (1, 0), ()),
            ):
                got = gens.operator(("L", mu), m).commutator_column(
                    gens.operator(("S1", nu), n), probe
                )
                want: dict = {}
                if n[mu - 1]:
                    _merge(want, gens.operator(("S1", nu), r).column(probe), n[mu - 1])
                if mu == nu:
                    for rho in (1, 2):
                        if m[rho - 1]:
                            _merge(
                                want,
                                gens.operator(("S1", rho), r).column(probe),
                                m[rho - 1],
                            )
                assert _dist(got, want) < 1e-12, (mu, nu, probe)


def test_h_family_commutes_numerically():
    gens = _gens()
    probe = (p_slot_key(1), (0, 0), (PHI1,))
    op1 = gens.operator(("H", 1, 1, 2), (1, 0))
    op2 = gens.operator(("H", 2, 1, 2), (0, -1))
    assert _dist(op1.commutator_column(op2, probe), {}) == 0


def test_generator_momentum_window_enforced():
    gens = _gens()
    with pytest.raises(BoundaryError):
        gens.operator(("J", 1), (3, 0))


# -- charge measurements (the cross-sector identities) -----------------------


def test_vertex_level_equals_wick_level():
    t0 = time.time()
    k_vertex = measure_vertex_level(_space())
    k_wick = measure_level(SU2, N=2)
    assert abs(k_vertex - float(k_wick)) < 1e-8
    assert k_wick == 8
    assert time.time() - t0 < 300.0


def test_c1_c2_match_wick_charges():
    t0 = time.time()
    fit = measure_c1_c2(_space(), include_T=True)
    k1, k2 = measure_k1_k2(SU2, N=2)
    assert abs(fit.c1 - (1 + float(k1))) < 1e-8
    assert abs(fit.c2 - float(k2)) < 1e-8
    assert (fit.c1, fit.c2) == (4.0, 27.0)
    assert fit.residual < 1e-9
    assert abs(fit.k_s1 - 8.0) < 1e-8
    assert time.time() - t0 < 300.0


def test_c1_c2_with_currents_switched_off():
    # Pure qp sector: the +1 of c1 = 1 + k1 survives, everything else drops.
    fit = measure_c1_c2(_space(), include_T=False)
    assert abs(fit.c1 - 1.0) < 1e-8
    assert abs(fit.c2 - 0.0) < 1e-8


def test_charge_fits_need_two_directions():
    space = VertexSpace(SU2, TruncationSpec(N=1, L=4, P=3, M=2, current_cap=3))
    with pytest.raises(ValueError):
        measure_vertex_level(space)
    with pytest.raises(ValueError):
        measure_c1_c2(space)


def test_default_charges_contents():
    ch = dict(_charges())
    assert ch["k"] == 8.0
    assert ch["c1"] == 4.0
    assert ch["c2"] == 27.0


# -- numeric table sweeps -----------------------------------------------------


@pytest.mark.parametrize("table_name", ["CLASSICAL_MF", "EMB2", "DIFF_EXT"])
def test_numeric_table_sweep_is_exact_on_safe_probes(table_name):
    rows = check_table_numeric(table_name, _space(), charges=dict(_charges()))
    assert rows
    worst = max(rows, key=lambda r: r.deviation)
    assert worst.deviation < 1e-9, worst


def test_numeric_sweep_rejects_symbolic_only_tables():
    with pytest.raises(ValueError):
        check_table_numeric("MF", _space())
    with pytest.raises(ValueError):
        check_table_numeric("EMB1", _space())


# -- convergence across truncation stages -------------------------------------


def test_boundary_deviations_shrink_at_next_stage():
    """Near-boundary deviations strictly decrease when every cutoff grows."""
    small_space = _space()
    big_space = _space(DEFAULT.scaled_stage())
    edge = (2, 0)
    m1, m_1 = (1, 0), (-1, 0)
    elements = [
        # lattice-window clipping: one commutator path exits |w| <= P
        (("L", 1), m1, ("L", 1), m_1, (VACUUM_QP, edge, ())),
        (("L", 1), m1, ("L", 2), m_1, (p_slot_key(1), edge, ())),
        (("L", 1), m1, ("S1", 2), m_1, (p_slot_key(1), edge, ())),
        # particle-cap clipping: the dressed current pair creation overflows
        (("J", 3), m1, ("J", 1), m_1, (p_slot_key(1), (0, 0), (PHI1, PHI2))),
        # interior elements stay exact at both stages
        (("J", 1), m1, ("J", 2), m_1, (p_slot_key(1), (0, 0), ())),
        (("L", 1), m1, ("G", 1, 2), m_1, (VACUUM_QP, (0, 0), (PHI1,))),
    ]
    dev_small = stage_deviations("DIFF_EXT", small_space, elements, dict(_charges()))
    dev_big = stage_deviations(
        "DIFF_EXT", big_space, elements, dict(_charges(DEFAULT.scaled_stage()))
    )
    nonzero = 0
    for ds, db in zip(dev_small, dev_big):
        if ds.deviation > 0:
            nonzero += 1
            assert db.deviation < ds.deviation, (ds, db)
        else:
            assert db.deviation == 0, (ds, db)
    assert nonzero >= 4


def test_boundary_probe_keys_sit_on_the_boundary():
    space = _space()
    keys = boundary_probe_keys(space)
    assert any(key[1][0] == space.spec.P for key in keys)
    from curralg.vertex_fock import cur_npart

    assert any(cur_npart(key[2]) == space.spec.current_cap - 1 for key in keys)


# -- N = 1 degeneration --------------------------------------------------------


@pytest.mark.parametrize("include_T", [False, True])
def test_n1_family_closes_exactly(include_T):
    space = VertexSpace(SU2, TruncationSpec(N=1, L=4, P=3, M=2, current_cap=6))
    fit = measure_cubic_coefficient(space, include_T=include_T)
    assert fit.alpha == 0.0
    assert fit.beta == 0.0
    assert fit.residual == 0.0
    assert all(coeff == 0.0 for _, coeff in fit.values)


def test_n1_measurement_rejects_other_dimensions():
    with pytest.raises(ValueError):
        measure_cubic_coefficient(_space())
    with pytest.raises(ValueError):
        measure_cubic_coefficient(
            VertexSpace(SU2, TruncationSpec(N=1, L=4, P=2, M=2, current_cap=6))
        )
