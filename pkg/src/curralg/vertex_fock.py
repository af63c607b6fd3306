"""Numeric truncated-Fock realization of the lattice current algebra.

The trajectory sector is a commuting canonical pair of circle fields per
spacetime direction: oscillator modes q^mu_k, p_{mu,k} (0 < |k| <= M) with

    [p_{mu,j}, q^nu_k] = delta^nu_mu delta_{j+k,0},

plus a zero-mode momentum lattice: states carry a label w in Z^N clipped to
|w_mu| <= P, the vertex zero mode shifts w by m, and p_{mu,0}|w> = i w_mu |w>.
Vertex modes V_{m,j} (Fourier modes of e^{imq}) act exactly on a basis state:
the annihilator content is bounded by the state's p occupation and the
creator content by the mode-matching constraint, so no series truncation is
involved; only the basis itself is truncated.

Dressing the exact current bilinears of :mod:`curralg.wick_currents` with
vertex modes realizes the lattice families (J, G, H dressed, the closed
one-chain S1, and the dressed gl(N)+momentum family L).  Every realized
generator preserves the total excitation level, so commutator identities
hold to float precision on any state inside the cutoffs; deviations appear
only where the momentum window or the current-sector particle cap clips an
intermediate state, and those shrink as the truncation stage grows.

This is the only module that computes in floating point (complex doubles);
everything upstream is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .lie_core import StructureConstants
from .wick_currents import CurrentBody, build_currents, flavors_for, measure_level

__all__ = [
    "TruncationSpec",
    "VACUUM_QP",
    "total_level",
    "BoundaryError",
    "FitError",
    "OperatorMatrix",
    "VertexSpace",
    "build_vertex",
    "realize_generators",
    "RealizedGenerators",
    "default_probe_keys",
    "boundary_probe_keys",
    "p_slot_key",
    "q_slot_key",
    "measure_vertex_level",
    "measure_c1_c2",
    "ChargeFit",
    "default_charges",
    "check_table_numeric",
    "stage_deviations",
    "BracketDeviation",
    "measure_cubic_coefficient",
    "CubicFit",
]

_TRAJ = "traj"


class BoundaryError(ValueError):
    """A requested momentum cannot be represented inside the lattice window."""


class FitError(ValueError):
    """A charge fit found no usable matrix element or an inconsistent column."""


@dataclass(frozen=True)
class TruncationSpec:
    """Cutoffs for the truncated Fock space.

    L bounds the total excitation level (trajectory plus current sector),
    P the zero-mode momentum lattice (|w_mu| <= P), M the circle-mode window
    of the trajectory oscillators (0 < |k| <= M).  ``current_cap`` bounds the
    current-sector particle number; a level bound alone keeps infinitely
    many current zero-mode states, so the cap is part of the truncation.
    """

    N: int = 2
    L: int = 4
    P: int = 2
    M: int = 2
    current_cap: int = 3

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.L < 1 or self.P < 1 or self.M < 1:
            raise ValueError("L, P, M must be at least 1")
        if self.current_cap < 2:
            raise ValueError("current_cap below 2 leaves no room for a bilinear")

    def scaled_stage(self) -> "TruncationSpec":
        """The next truncation stage: every cutoff that can bite grows."""
        return TruncationSpec(self.N, self.L + 2, self.P + 1, self.M, self.current_cap + 2)


# -- basis bookkeeping ----------------------------------------------------
# A full basis key is (qp_key, w, cur_key): trajectory oscillator
# occupations, the lattice point, and current-sector occupations.  Slot
# conventions follow curralg.fock_oracle: a q slot is ((traj, mu), False, -k)
# and a p slot ((traj, mu), True, -k), k >= 1, so the oscillator CCR maps
# onto the same creator/annihilator amplitude rules.

VACUUM_QP: tuple = ()


def qp_level(qp_key: tuple) -> int:
    return sum(-slot[2] * cnt for slot, cnt in qp_key)


def cur_level(cur_key: tuple) -> int:
    return sum(-slot[2] * cnt for slot, cnt in cur_key)


def cur_npart(cur_key: tuple) -> int:
    return sum(cnt for _, cnt in cur_key)


def total_level(key: tuple) -> int:
    return qp_level(key[0]) + cur_level(key[2])


def _occ_add(occ_key: tuple, slot, delta: int):
    d = dict(occ_key)
    new = d.get(slot, 0) + delta
    if new < 0:
        return None
    if new == 0:
        d.pop(slot, None)
    else:
        d[slot] = new
    return tuple(sorted(d.items()))


def _state_add(dst: dict, key, amp: complex) -> None:
    cur = dst.get(key)
    new = amp if cur is None else cur + amp
    if new == 0:
        dst.pop(key, None)
    else:
        dst[key] = new


def _state_merge(dst: dict, src: dict, factor: complex = 1.0) -> None:
    if factor == 0:
        return
    for key, amp in src.items():
        _state_add(dst, key, amp * factor)


@lru_cache(maxsize=None)
def _creator_multisets(N: int, M: int, level: int) -> tuple:
    """All q-creator multisets {(mu, k): r} with sum k*r == level, k <= M."""
    kinds = [(mu, k) for mu in range(1, N + 1) for k in range(1, M + 1)]

    out = []

    def grow(i: int, left: int, picked):
        if left == 0:
            out.append(tuple(picked))
            return
        if i == len(kinds):
            return
        mu, k = kinds[i]
        grow(i + 1, left, picked)
        r = 1
        while k * r <= left:
            picked.append(((mu, k), r))
            grow(i + 1, left - k * r, picked)
            picked.pop()
            r += 1

    grow(0, level, [])
    return tuple(out)


_FACT = [1.0]
for _i in range(1, 40):
    _FACT.append(_FACT[-1] * _i)


class VertexSpace:
    """Shared context: structure constants, current bodies, and the cutoffs."""

    def __init__(self, sc: StructureConstants, spec: TruncationSpec):
        self.sc = sc
        self.spec = spec
        self.families = build_currents(sc, spec.N)
        self.flavors = flavors_for(sc.dim, spec.N)
        self._bodies = {label: fam.body for label, fam in self.families.items()}

    # -- truncation --------------------------------------------------------

    def in_window(self, w: tuple) -> bool:
        return all(abs(c) <= self.spec.P for c in w)

    def project(self, state: dict) -> dict:
        sp = self.spec
        out = {}
        for key, amp in state.items():
            qp_key, w, cur_key = key
            if not self.in_window(w):
                continue
            if qp_level(qp_key) + cur_level(cur_key) > sp.L:
                continue
            if cur_npart(cur_key) > sp.current_cap:
                continue
            out[key] = amp
        return out

    def vacuum_key(self, w: Optional[tuple] = None) -> tuple:
        w = tuple(0 for _ in range(self.spec.N)) if w is None else tuple(w)
        if len(w) != self.spec.N:
            raise ValueError("lattice point has wrong dimension")
        return (VACUUM_QP, w, ())

    # -- trajectory oscillators ---------------------------------------------

    def _qp_osc(self, state: dict, mu: int, is_p: bool, mode: int) -> dict:
        """One oscillator q^mu_mode (is_p False) or p_{mu,mode} (is_p True)."""
        if mode == 0:
            raise ValueError("mode 0 is not an oscillator here")
        out: dict = {}
        fl = (_TRAJ, mu)
        for (qp_key, w, cur_key), amp in state.items():
            if mode <= -1:
                new = _occ_add(qp_key, (fl, is_p, mode), +1)
                _state_add(out, (new, w, cur_key), amp)
            else:
                target = (fl, not is_p, -mode)
                cnt = dict(qp_key).get(target, 0)
                if cnt == 0:
                    continue
                new = _occ_add(qp_key, target, -1)
                _state_add(out, (new, w, cur_key), amp * (cnt if is_p else -cnt))
        return out

    def apply_vertex(self, m: tuple, j: int, state: dict) -> dict:
        """V_{m,j}, the mode-j part of the vertex factor for lattice vector m.

        Exact per state: enumerate p-annihilator submultisets, then q-creator
        multisets whose level matches the mode constraint; shift the lattice
        label by m.  Coefficients (i m_mu)^r / r! on both sides.
        """
        if len(m) != self.spec.N:
            raise ValueError("lattice vector has wrong dimension")
        out: dict = {}
        for (qp_key, w, cur_key), amp in state.items():
            w2 = tuple(a + b for a, b in zip(w, m))
            pslots = [(slot, cnt) for slot, cnt in qp_key if slot[1]]

            # enumerate annihilator choices r_i <= cnt_i over p slots
            def ann(i: int, mode_sum: int, coeff: complex, key: tuple):
                if i == len(pslots):
                    level = mode_sum - j
                    if level < 0:
                        return
                    for lam in _creator_multisets(self.spec.N, self.spec.M, level):
                        c2, key2 = coeff, key
                        for (mu, k), r in lam:
                            c2 *= (1j * m[mu - 1]) ** r / _FACT[r]
                            if c2 == 0:
                                break
                            key2 = _occ_add(key2, ((_TRAJ, mu), False, -k), r)
                        else:
                            _state_add(out, (key2, w2, cur_key), amp * c2)
                    return
                slot, cnt = pslots[i]
                (_, mu), _, mode = slot
                k = -mode
                ann(i + 1, mode_sum, coeff, key)
                c, fall = coeff, 1.0
                for r in range(1, cnt + 1):
                    fall *= -(cnt - r + 1)  # q_k on a p slot: -count per quantum
                    c = coeff * ((1j * m[mu - 1]) ** r / _FACT[r]) * fall
                    if c == 0:
                        break
                    ann(i + 1, mode_sum + k * r, c, _occ_add(key, slot, -r))

            ann(0, 0, 1.0, qp_key)
        return out

    # -- current sector -----------------------------------------------------

    def apply_current(self, label: tuple, mode: int, state: dict) -> dict:
        """One exact current bilinear mode on the current sector."""
        body: CurrentBody = self._bodies[label]
        out: dict = {}
        for (qp_key, w, cur_key), amp in state.items():
            for new_cur, factor in _apply_body_to_key(body, mode, cur_key):
                _state_add(out, (qp_key, w, new_cur), amp * factor)
        return out

    # -- realized generators --------------------------------------------------

    def _dressed_current(self, label: tuple, m: tuple, state: dict) -> dict:
        """sum_j V_{m,j} C_{-j} for a current family C; finite per state."""
        out: dict = {}
        for key, amp in state.items():
            sub = {key: amp}
            lo = -cur_level(key[2])
            hi = qp_level(key[0])  # p annihilation bounds the positive modes
            for j in range(lo, hi + 1):
                mid = self.apply_current(label, -j, sub)
                if mid:
                    _state_merge(out, self.apply_vertex(m, j, mid))
        return out

    def apply_J(self, a: int, m: tuple, state: dict) -> dict:
        return self._dressed_current(("J", a), m, state)

    def apply_G(self, a: int, mu: int, m: tuple, state: dict) -> dict:
        return self._dressed_current(("G", a, mu), m, state)

    def apply_H(self, a: int, mu: int, nu: int, m: tuple, state: dict) -> dict:
        return self._dressed_current(("H", a, mu, nu), m, state)

    def apply_S1(self, rho: int, m: tuple, state: dict) -> dict:
        """The closed one-chain: sum_{k != 0} (-ik) q^rho_k V_{m,-k}."""
        out: dict = {}
        for k in range(-self.spec.M, self.spec.M + 1):
            if k == 0:
                continue
            mid = self.apply_vertex(m, -k, state)
            if mid:
                _state_merge(out, self._qp_osc(mid, rho, False, k), 1j * k)
        return out

    def apply_L(self, mu: int, m: tuple, state: dict, include_T: bool = True) -> dict:
        """Dressed momentum plus current part.

        The momentum part is -i :V_m p_mu: with p's creation modes left of
        the vertex factor, annihilation modes right, and the zero mode acting
        on the undressed lattice label (diagonal value i w_mu) before the
        shift.  The current part is m_nu sum_j V_{m,j} T^nu_{mu,-j}.
        """
        out: dict = {}
        for k in range(1, self.spec.M + 1):
            # p_{mu,-k} V_{m,k}: vertex first, then the p creator
            mid = self.apply_vertex(m, k, state)
            if mid:
                _state_merge(out, self._qp_osc(mid, mu, True, -k), -1j)
            # V_{m,-k} p_{mu,k}: the p annihilator first
            mid = self._qp_osc(state, mu, True, k)
            if mid:
                _state_merge(out, self.apply_vertex(m, -k, mid), -1j)
        diag = {key: amp * (1j * key[1][mu - 1]) for key, amp in state.items() if key[1][mu - 1] != 0}
        if diag:
            _state_merge(out, self.apply_vertex(m, 0, diag), -1j)
        if include_T:
            for nu in range(1, self.spec.N + 1):
                if m[nu - 1] == 0:
                    continue
                _state_merge(out, self._dressed_current(("T", nu, mu), m, state), m[nu - 1])
        return out


def _apply_body_to_key(body: CurrentBody, mode: int, cur_key: tuple) -> list:
    """Exact bilinear application on a current-sector occupation key.

    Mirrors the oracle mechanics (same slot conventions) but works on bare
    keys with complex factors, and is memoised by the callers per operator.
    """
    results: list = []
    occ = dict(cur_key)
    for (A, B), coeff in body.items():
        ks = set()
        if mode <= -1:
            ks.update(range(mode, 0))
        for (fl, barred, s), _ in cur_key:
            if fl == B and not barred and -s >= max(mode, 0):
                ks.add(-s)
            if fl == A and barred and mode + s <= -1:
                ks.add(mode + s)
        if mode >= 1:
            for k in range(0, mode):
                if occ.get((B, False, -k)) and occ.get((A, True, k - mode)):
                    ks.add(k)
        for k in ks:
            a_mode, b_mode = mode - k, k
            if a_mode > 0 and b_mode <= -1:
                first, second = ((A, False, a_mode), (B, True, b_mode))
            else:
                first, second = ((B, True, b_mode), (A, False, a_mode))
            factor = 1
            key2 = cur_key
            dead = False
            for fl_s, barred_s, mode_s in (first, second):
                creates = mode_s <= -1 if barred_s else mode_s <= 0
                if creates:
                    key2 = _occ_add(key2, (fl_s, barred_s, mode_s), +1)
                else:
                    target = (fl_s, not barred_s, -mode_s)
                    cnt = dict(key2).get(target, 0)
                    if cnt == 0:
                        dead = True
                        break
                    factor *= cnt if barred_s else -cnt
                    key2 = _occ_add(key2, target, -1)
            if dead:
                continue
            results.append((key2, complex(coeff) * factor))
    merged: dict = {}
    for key2, factor in results:
        merged[key2] = merged.get(key2, 0.0) + factor
    return [(k, v) for k, v in merged.items() if v != 0]


class OperatorMatrix:
    """A truncated operator held as lazily computed sparse columns.

    ``column(key)`` is the exact application to one basis state followed by
    projection onto the truncated space, so operator products compose with
    matrix semantics (project after every factor).  ``boundary_loss``
    reports how much a column lost to the projection: zero on safe states.
    """

    def __init__(self, space: VertexSpace, label: str, apply_fn: Callable[[dict], dict]):
        self.space = space
        self.label = label
        self._apply_fn = apply_fn
        self._columns: dict = {}
        self._losses: dict = {}

    def column(self, key: tuple) -> dict:
        hit = self._columns.get(key)
        if hit is None:
            raw = self._apply_fn({key: 1.0})
            hit = self.space.project(raw)
            self._columns[key] = hit
            self._losses[key] = sum(abs(a) for k, a in raw.items() if k not in hit)
        return hit

    def boundary_loss(self, key: tuple) -> float:
        self.column(key)
        return self._losses[key]

    def apply(self, state: dict) -> dict:
        out: dict = {}
        for key, amp in state.items():
            _state_merge(out, self.column(key), amp)
        return out

    def matrix_element(self, row_key: tuple, col_key: tuple) -> complex:
        return self.column(col_key).get(row_key, 0.0)

    def commutator_column(self, other: "OperatorMatrix", key: tuple) -> dict:
        out = self.apply(other.column(key))
        _state_merge(out, other.apply(self.column(key)), -1.0)
        return out


def build_vertex(m: tuple, n: int, space: VertexSpace) -> OperatorMatrix:
    """The n-th Fourier mode of the vertex factor for lattice vector m."""
    m = tuple(m)
    if len(m) != space.spec.N:
        raise ValueError("lattice vector has wrong dimension")
    if any(abs(c) > space.spec.P for c in m):
        raise BoundaryError(f"momentum {m} exits the lattice window P={space.spec.P}")
    return OperatorMatrix(space, f"V[{m},{n}]", lambda st: space.apply_vertex(m, n, st))


class RealizedGenerators:
    """Factory for the realized generator family over one VertexSpace.

    Labels: ("J", a), ("G", a, mu), ("H", a, mu, nu), ("S1", rho), ("L", mu);
    each takes a lattice vector m.  Operators are memoised per (label, m).
    """

    def __init__(self, space: VertexSpace, include_T: bool = True):
        self.space = space
        self.include_T = include_T
        self._memo: dict = {}

    def operator(self, label: tuple, m) -> OperatorMatrix:
        m = tuple(m)
        if any(abs(c) > self.space.spec.P for c in m):
            raise BoundaryError(f"momentum {m} exits the lattice window P={self.space.spec.P}")
        memo_key = (label, m)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        sp = self.space
        kind = label[0]
        if kind == "J":
            fn = lambda st, a=label[1]: sp.apply_J(a, m, st)
        elif kind == "G":
            fn = lambda st, a=label[1], mu=label[2]: sp.apply_G(a, mu, m, st)
        elif kind == "H":
            fn = lambda st, a=label[1], mu=label[2], nu=label[3]: sp.apply_H(a, mu, nu, m, st)
        elif kind == "S1":
            fn = lambda st, rho=label[1]: sp.apply_S1(rho, m, st)
        elif kind == "L":
            fn = lambda st, mu=label[1]: sp.apply_L(mu, m, st, include_T=self.include_T)
        else:
            raise ValueError(f"unknown generator label {label!r}")
        op = OperatorMatrix(sp, f"{label}{m}", fn)
        self._memo[memo_key] = op
        return op

    def labels(self, species: tuple) -> list:
        """All index combinations for the requested species tuple."""
        sp = self.space.spec
        dim = self.space.sc.dim
        out = []
        for s in species:
            if s == "J":
                out += [("J", a) for a in range(1, dim + 1)]
            elif s == "G":
                out += [("G", a, mu) for a in range(1, dim + 1) for mu in range(1, sp.N + 1)]
            elif s == "H":
                out += [
                    ("H", a, mu, nu)
                    for a in range(1, dim + 1)
                    for mu in range(1, sp.N + 1)
                    for nu in range(mu + 1, sp.N + 1)
                ]
            elif s == "S1":
                out += [("S1", rho) for rho in range(1, sp.N + 1)]
            elif s == "L":
                out += [("L", mu) for mu in range(1, sp.N + 1)]
            else:
                raise ValueError(f"unknown species {s!r}")
        return out


def realize_generators(sc: StructureConstants, spec: TruncationSpec, include_T: bool = True):
    """Convenience constructor: space plus generator factory."""
    space = VertexSpace(sc, spec)
    return space, RealizedGenerators(space, include_T=include_T)


def p_slot_key(mu: int, k: int = 1) -> tuple:
    """Occupation key for a single p_{mu,-k} quantum."""
    return ((((_TRAJ, mu), True, -k), 1),)


def q_slot_key(mu: int, k: int = 1) -> tuple:
    """Occupation key for a single q^mu_{-k} quantum."""
    return ((((_TRAJ, mu), False, -k), 1),)


def default_probe_keys(space: VertexSpace) -> list:
    """A small probe set touching every sector, all inside the cutoffs."""
    N = space.spec.N
    zero = tuple(0 for _ in range(N))
    shifted = (1,) + zero[1:]
    probes = [(VACUUM_QP, zero, ()), (VACUUM_QP, shifted, ())]
    for mu in range(1, N + 1):
        probes.append((p_slot_key(mu), zero, ()))
        probes.append((q_slot_key(mu), zero, ()))
    phi1 = ((("phi", 1), False, 0), 1)
    psi1bar = ((("psi", 1, 1), True, -1), 1)
    probes.append((VACUUM_QP, zero, (phi1,)))
    probes.append((VACUUM_QP, zero, (psi1bar,)))
    probes.append((p_slot_key(1), zero, (phi1,)))
    return probes


@dataclass(frozen=True)
class ChargeFit:
    c1: float
    c2: float
    k_s1: float
    residual: float
    conventions: str = "cocycle fitted against (c1 m_nu n_mu + c2 m_mu n_nu) m_rho S1^rho(m+n)"


def _column_ratio(numer: dict, denom: dict) -> tuple:
    """Best single coefficient with max-norm residual of numer - c*denom."""
    if not denom:
        raise FitError("reference column is zero; no element to fit against")
    ref_key = max(denom, key=lambda k: abs(denom[k]))
    c = numer.get(ref_key, 0.0) / denom[ref_key]
    keys = set(numer) | set(denom)
    resid = max(abs(numer.get(k, 0.0) - c * denom.get(k, 0.0)) for k in keys)
    return c, resid


def _real_coeff(c: complex, what: str, tol: float = 1e-9) -> float:
    if abs(c.imag) > tol:
        raise FitError(f"{what} came out non-real: {c}")
    return c.real


def _s1_reference_column(gens: RealizedGenerators, m: tuple, n: tuple, probe: tuple) -> dict:
    """Column of m_rho S1^rho(m+n) on the probe state."""
    space = gens.space
    r = tuple(a + b for a, b in zip(m, n))
    out: dict = {}
    for rho in range(1, space.spec.N + 1):
        if m[rho - 1] == 0:
            continue
        _state_merge(out, gens.operator(("S1", rho), r).column(probe), m[rho - 1])
    return out


def measure_vertex_level(space: VertexSpace) -> float:
    """The current-sector level read off the realized bracket.

    Fits the central part of [Jcal^a(m), Jcal^a(n)] against
    -k delta^{ab} m_rho S1^rho(m+n) at m+n != 0 (the one-chain vanishes
    identically at zero argument, so the diagonal carries no information).
    Returns k; it must agree with wick_currents.measure_level.
    """
    if space.spec.N < 2:
        raise ValueError("needs N >= 2 so that m and m+n can differ")
    gens = RealizedGenerators(space)
    m = (1,) + (0,) * (space.spec.N - 1)
    n = (0, 1) + (0,) * (space.spec.N - 2)
    probe = (p_slot_key(1), tuple(0 for _ in range(space.spec.N)), ())
    op_m = gens.operator(("J", 1), m)
    op_n = gens.operator(("J", 1), n)
    bracket = op_m.commutator_column(op_n, probe)
    # f^{11c} = 0, so the whole column is the central part
    ref = _s1_reference_column(gens, m, n, probe)
    coeff, resid = _column_ratio(bracket, ref)
    k = _real_coeff(-coeff, "vertex level k")
    if resid > 1e-9:
        raise FitError(f"level fit residual {resid} too large")
    return k


def measure_c1_c2(space: VertexSpace, include_T: bool = True, tol: float = 1e-9) -> ChargeFit:
    """Fit the cocycle of the realized L family.

    [L_mu(m), L_nu(n)] minus its bilinear part must be proportional to
    m_rho S1^rho(m+n) with coefficient (c1 m_nu n_mu + c2 m_mu n_nu).
    With m = e_1, n = e_2 the index pair (mu,nu) = (2,1) isolates c1 and
    (1,2) isolates c2.  Requires N >= 2.
    """
    if space.spec.N < 2:
        raise ValueError("c1/c2 are only separable for N >= 2")
    gens = RealizedGenerators(space, include_T=include_T)
    N = space.spec.N
    zero = tuple(0 for _ in range(N))
    m = (1,) + (0,) * (N - 1)
    n = (0, 1) + (0,) * (N - 2)
    r = tuple(a + b for a, b in zip(m, n))
    probes = [
        (p_slot_key(1), zero, ()),
        (p_slot_key(2), zero, ()),
    ]

    def cocycle(mu: int, nu: int) -> tuple:
        op_m = gens.operator(("L", mu), m)
        op_n = gens.operator(("L", nu), n)
        vals, resids = [], []
        for probe in probes:
            col = op_m.commutator_column(op_n, probe)
            # subtract the bilinear part: n_mu L_nu(m+n) - m_nu L_mu(m+n)
            if n[mu - 1] != 0:
                _state_merge(col, gens.operator(("L", nu), r).column(probe), -n[mu - 1])
            if m[nu - 1] != 0:
                _state_merge(col, gens.operator(("L", mu), r).column(probe), m[nu - 1])
            ref = _s1_reference_column(gens, m, n, probe)
            c, resid = _column_ratio(col, ref)
            vals.append(c)
            resids.append(resid)
        if abs(vals[0] - vals[1]) > tol:
            raise FitError(f"cocycle fit disagrees between probes: {vals}")
        return vals[0], max(resids)

    # (mu,nu)=(2,1): pattern = c1 * m_1 n_2 = c1;  (1,2): pattern = c2
    raw_c1, res1 = cocycle(2, 1)
    raw_c2, res2 = cocycle(1, 2)
    k_s1 = measure_vertex_level(space)
    return ChargeFit(
        c1=_real_coeff(raw_c1, "c1"),
        c2=_real_coeff(raw_c2, "c2"),
        k_s1=k_s1,
        residual=max(res1, res2),
    )


@dataclass(frozen=True)
class BracketDeviation:
    """Worst deviation of one realized bracket from its closed form."""

    label1: tuple
    label2: tuple
    m: tuple
    n: tuple
    deviation: float
    probe: tuple = ()


def _formal_generator(label: tuple, arg):
    from . import formal_algebra as fa

    kind = label[0]
    if kind == "J":
        return fa.J(label[1], arg)
    if kind == "G":
        return fa.G(label[1], label[2], arg)
    if kind == "H":
        return fa.H(label[1], label[2], label[3], arg)
    if kind == "S1":
        return fa.S1(label[1], arg)
    if kind == "L":
        return fa.L(label[1], arg)
    raise ValueError(f"no formal counterpart for {label!r}")


def _numeric_momentum(arg, vectors: dict) -> tuple:
    N = arg.N
    out = [0] * N
    for name, c in arg.parts:
        vec = vectors[name]
        for i in range(N):
            out[i] += c * vec[i]
    return tuple(out)


def _operator_label(term) -> tuple:
    if term.species in ("J", "G", "H"):
        return (term.species, term.adjoint) + tuple(term.sidx)
    return (term.species,) + tuple(term.sidx)


def _expected_column(
    gens: RealizedGenerators,
    table,
    charges: dict,
    label1: tuple,
    m: tuple,
    label2: tuple,
    n: tuple,
    probe: tuple,
) -> dict:
    """Realize the closed form of one formal bracket as a numeric column."""
    from . import formal_algebra as fa

    N = gens.space.spec.N
    ms = fa.MomentumSymbol("m", N)
    ns = fa.MomentumSymbol("n", N)
    expr = fa.bracket(table, _formal_generator(label1, ms), _formal_generator(label2, ns))
    vectors = {"m": m, "n": n}
    assignment = dict(charges)
    for i in range(N):
        assignment[f"m_{i+1}"] = m[i]
        assignment[f"n_{i+1}"] = n[i]
    out: dict = {}
    for (term, delta), poly in expr.terms.items():
        if delta is not None and any(_numeric_momentum(delta, vectors)):
            continue
        coeff = complex(poly.evaluate(assignment))
        if coeff == 0:
            continue
        if term.species == "1":
            _state_add(out, probe, coeff)
            continue
        arg = _numeric_momentum(term.arg, vectors)
        op = gens.operator(_operator_label(term), arg)
        _state_merge(out, op.column(probe), coeff)
    return out


def default_charges(space: VertexSpace, include_c: bool = False) -> dict:
    """Numeric values for the charge indeterminates of the formal tables.

    k always comes from the exact engine; c1/c2 (only meaningful for the
    vector-field table) from the realized fit when requested.
    """
    charges = {"k": float(measure_level(space.sc, space.spec.N)), "c1": 0.0, "c2": 0.0}
    if include_c:
        fit = measure_c1_c2(space)
        charges["c1"] = fit.c1
        charges["c2"] = fit.c2
    return charges


_NUMERIC_TABLES = ("CLASSICAL_MF", "EMB2", "DIFF_EXT")


def check_table_numeric(
    table_name: str,
    space: VertexSpace,
    momenta: Optional[list] = None,
    probes: Optional[list] = None,
    charges: Optional[dict] = None,
) -> list:
    """Compare every realized bracket of a one-chain table with its closed form.

    Sweeps all unordered generator pairs over the configured momenta and
    probe states; returns one BracketDeviation per generator pair holding
    the worst deviation found.  Only the tables whose species are all
    realized here are accepted (the three-chain tables are not).
    """
    if table_name not in _NUMERIC_TABLES:
        raise ValueError(f"numeric sweep supports {_NUMERIC_TABLES}, not {table_name!r}")
    from .formal_algebra import make_table

    N = space.spec.N
    table = make_table(table_name, space.sc, N)
    gens = RealizedGenerators(space)
    if charges is None:
        charges = default_charges(space, include_c=(table_name == "DIFF_EXT"))
    if momenta is None:
        window = [-1, 0, 1]
        vecs = [tuple(v) for v in _grid(window, N)]
        momenta = [(mv, nv) for mv in vecs for nv in vecs]
    if probes is None:
        probes = default_probe_keys(space)
    labels = gens.labels(table.species)
    rows = []
    for i, lab1 in enumerate(labels):
        for lab2 in labels[i:]:
            worst = BracketDeviation(lab1, lab2, (), (), 0.0)
            for mv, nv in momenta:
                op1 = gens.operator(lab1, mv)
                op2 = gens.operator(lab2, nv)
                for probe in probes:
                    lhs = op1.commutator_column(op2, probe)
                    rhs = space.project(_expected_column(gens, table, charges, lab1, mv, lab2, nv, probe))
                    dev = _column_distance(lhs, rhs)
                    if dev > worst.deviation:
                        worst = BracketDeviation(lab1, lab2, mv, nv, dev, probe)
            rows.append(worst)
    return rows


def _grid(window: list, N: int):
    if N == 0:
        yield ()
        return
    for head in window:
        for tail in _grid(window, N - 1):
            yield (head,) + tail


def _column_distance(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys), default=0.0)


def boundary_probe_keys(space: VertexSpace) -> list:
    """Probes where the lattice window or the particle cap can clip.

    A commutator on these states loses weight asymmetrically between its two
    application orders, so the deviation from the closed form is nonzero and
    must shrink when every cutoff grows by one stage.
    """
    sp = space.spec
    zero = tuple(0 for _ in range(sp.N))
    edge = (sp.P,) + zero[1:]
    phi1 = ((("phi", 1), False, 0), 1)
    phi2 = ((("phi", 2), False, 0), 1)
    probes = [
        (VACUUM_QP, edge, ()),
        (p_slot_key(1), edge, ()),
    ]
    if sp.current_cap >= 2:
        cap_filler = (phi1, (phi2[0], sp.current_cap - 2)) if sp.current_cap > 2 else (phi1,)
        probes.append((VACUUM_QP, zero, tuple(sorted(cap_filler))))
        probes.append((VACUUM_QP, edge, (phi1,)))
    return probes


def stage_deviations(
    table_name: str,
    space: VertexSpace,
    elements: list,
    charges: Optional[dict] = None,
) -> list:
    """Deviation of fixed tested elements (bracket, momenta, probe) in one space."""
    from .formal_algebra import make_table

    table = make_table(table_name, space.sc, space.spec.N)
    gens = RealizedGenerators(space)
    if charges is None:
        charges = default_charges(space, include_c=(table_name == "DIFF_EXT"))
    out = []
    for lab1, mv, lab2, nv, probe in elements:
        op1 = gens.operator(lab1, mv)
        op2 = gens.operator(lab2, nv)
        lhs = op1.commutator_column(op2, probe)
        rhs = space.project(_expected_column(gens, table, charges, lab1, mv, lab2, nv, probe))
        out.append(BracketDeviation(lab1, lab2, mv, nv, _column_distance(lhs, rhs), probe))
    return out


@dataclass(frozen=True)
class CubicFit:
    """Witt-sector extension candidates measured at N = 1.

    The one-chain vanishes identically at N = 1 (its closedness relation
    pins it to zero), so any surviving extension of the realized L family
    would have to live on the vertex zero modes.  ``values`` maps (m, n)
    to the fitted coefficient of the (V_{m+n})_0 column on probes far
    enough from every cutoff boundary; alpha and beta solve
    coefficient = alpha*(m-n)*(m+n)^2 + beta*(m-n), the two density-valued
    cocycle shapes of this degree.  Measured outcome: the family closes
    exactly, every coefficient is zero and alpha = beta = 0.
    """

    alpha: float
    beta: float
    residual: float
    values: tuple


def _degeneration_probes(space: VertexSpace, m: int, n: int) -> list:
    """Probes on which the (m, n) bracket provably clears every cutoff.

    Both commutator paths must keep the lattice label inside the window
    (the label passes through w+m or w+n before landing on w+m+n), else
    one path is clipped and the deviation measures the truncation, not
    the algebra.  Levels are preserved by every generator and the current
    sector is probed from its vacuum, so the lattice window is the only
    constraint.
    """
    P = space.spec.P
    shifts = (0, m, n, m + n)
    probes = []
    for w in range(-P, P + 1):
        if any(abs(w + s) > P for s in shifts):
            continue
        lat = (w,)
        probes.append((VACUUM_QP, lat, ()))
        probes.append((p_slot_key(1), lat, ()))
        probes.append((q_slot_key(1), lat, ()))
    return probes


def measure_cubic_coefficient(space: VertexSpace, include_T: bool = False, tol: float = 1e-9) -> CubicFit:
    if space.spec.N != 1:
        raise ValueError("the degeneration measurement runs at N = 1")
    if space.spec.P < 3:
        raise ValueError("the (m, n) grid reaches |m+n| = 3; needs P >= 3")
    gens = RealizedGenerators(space, include_T=include_T)
    pairs = [(2, -1), (2, 1), (1, -2), (1, 2), (-2, 1), (1, -1), (2, -2)]
    values = []
    for m, n in pairs:
        op_m = gens.operator(("L", 1), (m,))
        op_n = gens.operator(("L", 1), (n,))
        r = (m + n,)
        ref_op = build_vertex(r, 0, space)
        coeffs = []
        for probe in _degeneration_probes(space, m, n):
            col = op_m.commutator_column(op_n, probe)
            _state_merge(col, gens.operator(("L", 1), r).column(probe), -(n - m))
            ref = ref_op.column(probe)
            if not col and not ref:
                continue
            c, resid = _column_ratio(col, ref) if ref else (0.0, _column_distance(col, {}))
            if resid > tol:
                raise FitError(f"extension at ({m},{n}) is not proportional to the vertex zero mode: residual {resid}")
            coeffs.append(c)
        if not coeffs:
            raise FitError(f"no usable probe for ({m},{n})")
        spread = max(abs(c - coeffs[0]) for c in coeffs)
        if spread > tol:
            raise FitError(f"extension coefficient at ({m},{n}) varies across probes: {coeffs}")
        values.append(((m, n), _real_coeff(complex(coeffs[0]), "extension coefficient")))

    # solve gamma(m,n) = alpha*(m-n)*(m+n)^2 + beta*(m-n) from the grid
    rows = [((m - n) * (m + n) ** 2, (m - n), g) for (m, n), g in values]
    (a1, b1, g1), (a2, b2, g2) = rows[0], rows[1]
    det = a1 * b2 - a2 * b1
    if det == 0:
        raise FitError("degenerate fit grid")
    alpha = (g1 * b2 - g2 * b1) / det + 0.0  # +0.0 folds -0.0
    beta = (a1 * g2 - a2 * g1) / det + 0.0
    residual = max(abs(a * alpha + b * beta - g) for a, b, g in rows)
    return CubicFit(alpha=alpha, beta=beta, residual=residual, values=tuple(values))
