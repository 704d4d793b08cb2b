"""Tour of the exact matrix layer: determinants, Pfaffians, and the two
adjoints, over both GF(p) scalars and polynomial entries.

Everything here is exact arithmetic; no floating point anywhere.

Run:  python3 demos/02_pfaffian_toolkit.py
"""

import random

from linkq.poly import Poly
from linkq.primefield import PrimeField
from linkq.ringmat import (
    RingMatrix,
    block_matrix,
    classical_adjoint,
    det,
    maximal_order_pfaffians,
    pfaffian,
    pfaffian_adjoint,
)


def random_skew(rng, field, n):
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randrange(field.p)
            grid[i][j] = v
            grid[j][i] = -v % field.p
    return RingMatrix.over_field(field, grid)


def main():
    field = PrimeField(101)
    rng = random.Random(7)

    print("== Pf(A)^2 = det(A) for a random 6x6 skew-symmetric matrix")
    a = random_skew(rng, field, 6)
    pf = pfaffian(a)
    print(f"  Pf(A) = {int(pf)},  Pf(A)^2 = {int(pf * pf)},  det(A) = {int(det(a))}")

    print("\n== block matrix [[0, M], [-M^T, 0]]")
    m = RingMatrix.over_field(field, [[rng.randrange(101) for _ in range(3)] for _ in range(3)])
    zero = RingMatrix.zeros(3, 3, m)
    blocked = block_matrix([[zero, m], [-m.transpose(), zero]])
    print(f"  Pf = {int(pfaffian(blocked))},  (-1)^(3*2/2) det(M) = {int(-det(m))}")

    print("\n== adjoints undo their matrices up to det / Pf")
    adj = classical_adjoint(m)
    print(f"  (M adj(M))[0,0] = {int((m * adj)[0, 0])} = det(M) = {int(det(m))}")
    skew = random_skew(rng, field, 4)
    skew_adj = pfaffian_adjoint(skew)
    print(f"  (A A_adj)[2,2] = {int((skew * skew_adj)[2, 2])} = Pf(A) = {int(pfaffian(skew))}")

    print("\n== maximal-order Pfaffians of an odd-size matrix share one minor cache")
    odd = random_skew(rng, field, 7)
    sweep = maximal_order_pfaffians(odd)
    print(f"  Pf_1..Pf_7 = {[int(v) for v in sweep]}")

    print("\n== polynomial entries work identically (GF(5)[x,y,z])")
    F5 = PrimeField(5)
    x, y, z = (Poly.variable(F5, i) for i in range(3))
    poly_skew = RingMatrix.over_polys(
        F5,
        [
            [0 * x, x + y, z],
            [-(x + y), 0 * x, y],
            [-z, -y, 0 * x],
        ],
    )
    print(f"  Pf_2 of a 3x3 skew polynomial matrix: {maximal_order_pfaffians(poly_skew)[1].to_text()}")


if __name__ == "__main__":
    main()
