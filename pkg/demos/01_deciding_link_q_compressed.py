"""Deciding the link-q-compressed property.

A homogeneous f in GF(p)[x,y,z] of degree d is link-q-compressed when the
colon ideal m^[q] : f agrees with m^[q] itself in every degree up to half the
socle degree s = 3(q-1) - d.  This script walks through the basic decision
API on three instructive inputs:

  * the quadric xy - z^2, which is link-q-compressed for every q,
  * a pure power x^d, which never is,
  * the quartic x^4 + x^3 y + x^3 z + y^2 z^2 over GF(3), which is
    link-9-compressed but stops being link-27-compressed.

Run:  python3 demos/01_deciding_link_q_compressed.py
"""

from linkq import colon
from linkq.poly import parse, quadric
from linkq.primefield import PrimeField


def show(report):
    print(f"  verdict: {report.verdict}   (s = {report.s}, scan up to {report.half})")
    if not report.verdict:
        print(f"  first failing degree: {report.first_failure_degree} "
              f"(excess dimension {report.excess})")


def main():
    F5 = PrimeField(5)

    print("== xy - z^2 over GF(5), q = 5")
    f = quadric(F5)
    show(colon.is_lqc(f, 5))

    print("\n== x^2 over GF(5), q = 5  (x^(q-d) = x^3 spoils it)")
    show(colon.is_lqc(parse("x^2", F5), 5))

    F3 = PrimeField(3)
    quartic = parse("x^4+x^3*y+x^3*z+y^2*z^2", F3)

    print("\n== the quartic over GF(3), q = 9")
    show(colon.is_lqc(quartic, 9))

    print("\n== the same quartic at q = 27 (takes a few seconds)")
    report = colon.is_lqc(quartic, 27)
    show(report)
    profile = colon.generator_profile(quartic, 27)
    print(f"  minimal generators by degree: {profile.generators}")
    print(f"  extra generators beyond x^27, y^27, z^27: {profile.extra_generator_degrees}")
    print("  (two sit at degree 37 = s/2, which is exactly the failure)")


if __name__ == "__main__":
    main()
