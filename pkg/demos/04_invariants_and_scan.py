"""Numerical invariants of R/m^[q] and the density of the lqc property.

For link-q-compressed f with q >= d + 3 the package both computes and
cross-checks closed forms: the Hilbert-Kunz value (3/4) d q^2 - (d^3 - d)/12,
the socle concentrated in degree (3(q-1) + d - 2)/2 with dimension 2d, and
Castelnuovo-Mumford regularity (3q + d - 5)/2.  The property is also
invariant under invertible linear changes of variable, and a seeded scan
shows how common it is among random forms.

Run:  python3 demos/04_invariants_and_scan.py
"""

import random

from linkq import colon
from linkq.poly import Poly, degree_basis, parse, quadric
from linkq.primefield import PrimeField


def main():
    F5 = PrimeField(5)
    f = quadric(F5)

    print("== quotient invariants for f = xy - z^2, q = 5")
    qr = colon.quotient_report(f, 5)
    print(f"  Hilbert function: {list(qr.hilbert)}")
    print(f"  Hilbert-Kunz value: {qr.hk} (closed form {qr.hk_formula}, match={qr.hk_matches})")
    print(f"  socle: {qr.socle} (formula degree {qr.socle_formula_degree}, match={qr.socle_matches})")
    print(f"  regularity: top degree {qr.top_degree} (formula {qr.regularity_formula})")

    print("\n== the same data with no closed-form claim (non-lqc input xy, q = 3)")
    F3 = PrimeField(3)
    qr_xy = colon.quotient_report(parse("x*y", F3), 3)
    print(f"  HK = {qr_xy.hk} by direct count; formula fields absent: {qr_xy.hk_formula is None}")

    print("\n== invariance under linear isomorphism (10 random changes over GF(5))")
    rng = random.Random(42)
    verdicts = []
    for _ in range(10):
        t = colon.random_invertible_change(F5, rng)
        g = colon.apply_linear_change(f, t, rng.randrange(1, 5))
        verdicts.append(colon.is_lqc(g, 5).verdict)
    print(f"  all ten images still lqc: {all(verdicts)}")
    print(f"  diagonal forms too: x^2-y^2-z^2 -> {colon.is_lqc(parse('x^2+4*y^2+4*z^2', F5), 5).verdict}, "
          f"x^2+y^2+z^2 -> {colon.is_lqc(parse('x^2+y^2+z^2', F5), 5).verdict}")

    print("\n== seeded density scan: 200 random quadrics over GF(5) at q = 5")
    trials, lqc_count = 200, 0
    histogram = {}
    basis = degree_basis(2, 3)
    for _ in range(trials):
        sample = Poly(F5, 3, {m: rng.randrange(5) for m in basis})
        if not sample:
            histogram[0] = histogram.get(0, 0) + 1
            continue
        report = colon.is_lqc(sample, 5)
        if report.verdict:
            lqc_count += 1
        else:
            histogram[report.first_failure_degree] = histogram.get(report.first_failure_degree, 0) + 1
    print(f"  lqc fraction: {lqc_count}/{trials} = {lqc_count / trials:.3f}")
    print(f"  failures by first bad degree: {dict(sorted(histogram.items()))}")
    print("  (the lqc locus is a nonempty Zariski-open set, so most forms land in it;")
    print("   the exact fraction is data, not a theorem)")


if __name__ == "__main__":
    main()
