"""Brute-force Fock space for the current oscillators, with hard cutoffs.

This module applies currents literally, as normal-ordered mode sums acting
on an explicit occupation-number basis, so it shares no algebra with the
closed-form commutator in :mod:`curralg.wick_currents`.  It exists to be
disagreed with: tests commute truncated matrices here and compare columns
against the engine.

Basis and conventions
---------------------
A slot is ``(flavor, barred, mode)`` with creator modes only: unbarred
``mode <= 0`` (the zero mode creates), barred ``mode <= -1``.  A basis key
is a sorted tuple of ``(slot, count)`` pairs; the vacuum is ``()``.  States
are dicts ``key -> exact amplitude`` over the unnormalised basis, so a
creator has matrix element 1 and an annihilator picks up the occupation
count times the pair's central weight:

    Xbar_j  kills slot (X, False, -j)  with amplitude +count
    X_k     kills slot (X, True,  -k)  with amplitude -count

(from [Xbar_j, X_k] = delta_{j+k,0}).  Truncation is by total level
(sum of -mode over slots) and total particle number; a level bound alone
keeps infinitely many zero-mode states, hence the particle cap.

A bilinear sum_k :A_{m-k} Bbar_k: applied to one basis key touches finitely
many k: a window of pure creators plus finitely many k that annihilate an
occupied slot.  Every surviving term changes the level by exactly -m and
the particle count by -2, 0, or +2.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar

__all__ = [
    "vacuum",
    "slot_level",
    "key_level",
    "key_npart",
    "state_add",
    "state_scale",
    "state_project",
    "states_equal",
    "apply_oscillator",
    "apply_bilinear",
    "apply_body",
    "enumerate_keys",
    "FockOracle",
]

BasisKey = tuple  # sorted ((slot, count), ...)
State = dict  # BasisKey -> Scalar


def vacuum() -> State:
    return {(): Fraction(1)}


def slot_level(slot) -> int:
    return -slot[2]


def key_level(key: BasisKey) -> int:
    return sum(-slot[2] * cnt for slot, cnt in key)


def key_npart(key: BasisKey) -> int:
    return sum(cnt for _, cnt in key)


def _key_with(key: BasisKey, slot, delta: int):
    d = dict(key)
    new = d.get(slot, 0) + delta
    if new < 0:
        return None
    if new == 0:
        d.pop(slot, None)
    else:
        d[slot] = new
    return tuple(sorted(d.items()))


def state_add(dst: State, src: State, factor=1) -> None:
    if factor == 0:
        return
    for key, amp in src.items():
        cur = dst.get(key)
        new = amp * factor if cur is None else cur + amp * factor
        if new == 0:
            dst.pop(key, None)
        else:
            dst[key] = new


def state_scale(state: State, factor) -> State:
    if factor == 0:
        return {}
    return {key: amp * factor for key, amp in state.items()}


def state_project(state: State, level_max: int, npart_max: int) -> State:
    return {
        key: amp
        for key, amp in state.items()
        if key_level(key) <= level_max and key_npart(key) <= npart_max
    }


def states_equal(x: State, y: State) -> bool:
    if len(x) != len(y):
        return False
    for key, amp in x.items():
        other = y.get(key)
        if other is None or other != amp:
            return False
    return True


def _osc_key(key: BasisKey, flavor, barred: bool, mode: int):
    """Apply one oscillator to one basis key: (new_key, amplitude) or None."""
    creates = mode <= -1 if barred else mode <= 0
    if creates:
        return _key_with(key, (flavor, barred, mode), +1), 1
    target = (flavor, not barred, -mode)
    count = dict(key).get(target, 0)
    if count == 0:
        return None
    return _key_with(key, target, -1), count if barred else -count


def apply_oscillator(state: State, flavor, barred: bool, mode: int) -> State:
    out: State = {}
    for key, amp in state.items():
        hit = _osc_key(key, flavor, barred, mode)
        if hit is None:
            continue
        new_key, factor = hit
        cur = out.get(new_key)
        new = amp * factor if cur is None else cur + amp * factor
        if new == 0:
            out.pop(new_key, None)
        else:
            out[new_key] = new
    return out


def _candidate_modes(key: BasisKey, A, B, m: int):
    ks = set()
    if m <= -1:
        ks.update(range(m, 0))  # both parts create
    occ = dict(key)
    lo = max(m, 0)
    for (fl, barred, s), _ in key:
        if fl == B and not barred and -s >= lo:
            ks.add(-s)  # Bbar_k annihilates an occupied slot
        if fl == A and barred and m + s <= -1:
            ks.add(m + s)  # A_{m-k} annihilates an occupied slot
    if m >= 1:
        for k in range(0, m):  # both parts annihilate
            if occ.get((B, False, -k)) and occ.get((A, True, k - m)):
                ks.add(k)
    return ks


def apply_bilinear(state: State, A, B, m: int) -> State:
    """sum_k :A_{m-k} Bbar_k: applied exactly (no cutoff inside the sum)."""
    out: State = {}
    for key, amp in state.items():
        for k in _candidate_modes(key, A, B, m):
            a_mode, b_mode = m - k, k
            a_creates, b_creates = a_mode <= 0, b_mode <= -1
            if (not a_creates) and b_creates:
                first, second = ((A, False, a_mode), (B, True, b_mode))
            else:
                first, second = ((B, True, b_mode), (A, False, a_mode))
            hit = _osc_key(key, *first)
            if hit is None:
                continue
            mid_key, f1 = hit
            hit = _osc_key(mid_key, *second)
            if hit is None:
                continue
            new_key, f2 = hit
            cur = out.get(new_key)
            new = amp * f1 * f2 if cur is None else cur + amp * f1 * f2
            if new == 0:
                out.pop(new_key, None)
            else:
                out[new_key] = new
    return out


def apply_body(state: State, body: dict, m: int) -> State:
    out: State = {}
    for (A, B), coeff in body.items():
        state_add(out, apply_bilinear(state, A, B, m), coeff)
    return out


def enumerate_keys(flavors, level_max: int, npart_max: int) -> list:
    """All basis keys within the cutoffs, vacuum first, in sorted order."""
    slots = []
    for fl in flavors:
        for lev in range(0, level_max + 1):
            slots.append((fl, False, -lev))
        for lev in range(1, level_max + 1):
            slots.append((fl, True, -lev))
    slots.sort()

    keys: list = []

    def grow(start: int, level: int, npart: int, picked):
        keys.append(tuple(picked))
        if npart == npart_max:
            return
        for i in range(start, len(slots)):
            slot = slots[i]
            lev = slot_level(slot)
            if level + lev > level_max:
                continue
            if picked and picked[-1][0] == slot:
                picked[-1] = (slot, picked[-1][1] + 1)
                grow(i, level + lev, npart + 1, picked)
                picked[-1] = (slot, picked[-1][1] - 1)
            else:
                picked.append((slot, 1))
                grow(i, level + lev, npart + 1, picked)
                picked.pop()

    grow(0, 0, 0, [])
    return sorted(set(keys), key=lambda k: (key_npart(k), key_level(k), k))


class FockOracle:
    """Truncated-matrix application of current families, memoised per column.

    ``families`` maps labels to objects with a ``body`` attribute (the
    coefficient pattern).  Truncation follows matrix semantics exactly: the
    operator for mode ``m`` is the full application followed by projection,
    so a product of operators projects after every factor.
    """

    def __init__(self, families: dict, level_max: int, npart_max: int):
        self.families = families
        self.level_max = level_max
        self.npart_max = npart_max
        self._memo: dict = {}

    def apply_exact(self, label, mode: int, key: BasisKey) -> State:
        """Untruncated application to a single basis key, memoised."""
        memo_key = (label, mode, key)
        hit = self._memo.get(memo_key)
        if hit is None:
            hit = apply_body({key: 1}, self.families[label].body, mode)
            self._memo[memo_key] = hit
        return hit

    def apply_truncated(self, label, mode: int, state: State) -> State:
        out: State = {}
        for key, amp in state.items():
            state_add(out, self.apply_exact(label, mode, key), amp)
        return state_project(out, self.level_max, self.npart_max)

    def commutator_column(self, lab1, m: int, lab2, n: int, key: BasisKey) -> State:
        """Column of the truncated-matrix commutator on one basis key."""
        xy = self.apply_truncated(lab1, m, self.apply_truncated(lab2, n, {key: Fraction(1)}))
        yx = self.apply_truncated(lab2, n, self.apply_truncated(lab1, m, {key: Fraction(1)}))
        state_add(xy, yx, -1)
        return xy

    def safe_keys(self, flavors, m: int, n: int) -> list:
        """Basis keys on which truncation provably cannot bite.

        Applying either factor must stay inside the cutoffs: one bilinear
        raises the level by at most max(-m, -n, 0) and the particle count
        by at most 2, so columns at level <= L - max(-m, -n, 0) and npart
        <= cap - 2 commute with the projections.
        """
        room = max(-m, -n, 0)
        return enumerate_keys(flavors, self.level_max - room, self.npart_max - 2)
