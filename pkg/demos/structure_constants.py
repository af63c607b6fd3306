#!/usr/bin/env python3
"""Exact structure constants and the identity suite.

Builds su(2) and su(3) in the orthonormal Hermitian basis, checks every
identity with exact arithmetic, and round-trips su(3) through the plain
text tensor format used by the CLI's --algebra-file option.

Run: python3 demos/structure_constants.py
"""

from curralg.lie_core import StructureConstants, build_su, verify_identities
from curralg.scalars import format_scalar


def show(sc, name):
    print(f"== {name} (dim {sc.dim}) ==")
    report = verify_identities(sc)
    for check in report.checks:
        print(f"  {check.name}: {'ok' if check.passed else 'FAIL'}")
    print(f"  d tensor: {'identically zero' if sc.d_is_zero else 'nonzero'}")
    print()


def main():
    su2 = build_su(2)
    su3 = build_su(3)
    show(su2, "su(2)")
    show(su3, "su(3)")

    # a few su(3) entries; d carries the single surd 1/sqrt(3) exactly
    print("sample su(3) entries")
    for label, value in (
        ("f^{123}", su3.f_at(1, 2, 3)),
        ("f^{147}", su3.f_at(1, 4, 7)),
        ("d^{118}", su3.d_at(1, 1, 8)),
        ("d^{888}", su3.d_at(8, 8, 8)),
    ):
        print(f"  {label} = {format_scalar(value)}")
    print()

    text = su3.to_text()
    again = StructureConstants.from_text(text)
    print(f"text round trip: {len(text.splitlines())} lines, "
          f"equal = {again.f == su3.f and again.d == su3.d}")


if __name__ == "__main__":
    main()
