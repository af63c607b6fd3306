"""Exact multivariate polynomials over the scalar ring.

Coefficients are exact scalars (Fraction or SurdSum), variables are plain
strings; a monomial is a sorted tuple of (variable, exponent) pairs.  The
symbolic bracket engine keeps momentum components and charge parameters as
polynomial indeterminates, so every cancellation it reports is an identity
in those symbols rather than a numeric coincidence.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, format_scalar

__all__ = ["Poly", "format_poly"]

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by variable name

_ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps: dict[str, int] = dict(m1)
    for var, e in m2:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Immutable polynomial; arithmetic returns new instances."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[Monomial, Scalar] = {}
        if terms:
            for mono, coef in terms.items():
                if coef != 0:
                    self.terms[mono] = coef

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({_ONE: c})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "SurdSum":
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coef
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "SurdSum":
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "SurdSum":
            if other == 0:
                return Poly()
            return Poly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        terms: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Poly.const(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set:
        out = set()
        for mono in self.terms:
            out.update(v for v, _ in mono)
        return out

    def coefficient(self, mono: Monomial) -> Scalar:
        return self.terms.get(mono, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "SurdSum":
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    # -- substitution and division ------------------------------------------

    def substitute(self, mapping: dict[str, "Poly"]) -> "Poly":
        """Replace variables by polynomials and expand."""
        out = Poly()
        for mono, coef in self.terms.items():
            term = Poly.const(coef)
            for var, exp in mono:
                rep = mapping.get(var)
                factor = rep if rep is not None else Poly.variable(var)
                term = term * (factor ** exp)
            out = out + term
        return out

    def evaluate(self, assignment: dict[str, Scalar]) -> Scalar:
        """Value of the polynomial at a full scalar assignment."""
        total: Scalar = Fraction(0)
        for mono, coef in self.terms.items():
            val: Scalar = coef
            for var, exp in mono:
                if var not in assignment:
                    raise KeyError(f"no value for variable {var!r}")
                for _ in range(exp):
                    val = val * assignment[var]
            total = total + val
        return total

    def divmod_linear(self, lin: "Poly", x: str) -> tuple["Poly", "Poly"]:
        """Quotient and remainder on division by a linear polynomial.

        ``lin`` must contain the bare variable ``x`` (exponent 1, alone in
        its monomial) and no other monomial involving ``x``; the remainder
        is then free of ``x`` and the pair (q, r) with self == q*lin + r is
        unique.
        """
        x_mono: Monomial = ((x, 1),)
        lead = lin.terms.get(x_mono)
        if lead is None or lead == 0:
            raise ValueError(f"divisor has no bare {x!r} term")
        for mono in lin.terms:
            if mono != x_mono and any(v == x for v, _ in mono):
                raise ValueError(f"divisor must be linear in {x!r}")
        rest = Poly({m: c for m, c in lin.terms.items() if m != x_mono})
        quot = Poly()
        rem = self
        while True:
            pending = [(m, c) for m, c in rem.terms.items() if any(v == x for v, _ in m)]
            if not pending:
                return quot, rem
            # eliminate the highest x-power first; each pass strictly lowers it
            mono, coef = max(pending, key=lambda mc: dict(mc[0])[x])
            exps = dict(mono)
            e = exps.pop(x)
            if e > 1:
                exps[x] = e - 1
            piece = Poly({tuple(sorted(exps.items())): coef * _inv(lead)})
            quot = quot + piece
            rem = rem - piece * lin


def _inv(s: Scalar) -> Scalar:
    if isinstance(s, (int, Fraction)):
        return 1 / Fraction(s)
    return 1 / s


def format_poly(p: Poly, unit: str = "") -> str:
    """Human-readable rendering with deterministic term order."""
    if p.is_zero:
        return "0"
    parts = []
    for mono in sorted(p.terms, key=lambda m: (sum(e for _, e in m), m)):
        coef = p.terms[mono]
        body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
        cs = format_scalar(coef)
        negative = cs.startswith("-")
        if negative:
            cs = cs[1:]
        if "+" in cs or "-" in cs[1:]:
            cs = f"({cs})"
        if body:
            piece = body if cs == "1" else f"{cs}*{body}"
        else:
            piece = cs
        if not parts:
            parts.append(("-" if negative else "") + piece)
        else:
            parts.append((" - " if negative else " + ") + piece)
    return "".join(parts)
