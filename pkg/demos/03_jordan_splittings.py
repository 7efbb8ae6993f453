"""Jordan splittings at p=2, and what survives a change of basis."""

from auternary.lattice import GramMatrix, determinant
from auternary.local2 import is_anisotropic2, is_diagonalizable2, jordan_split


def show(gram, p):
    sp = jordan_split(gram, p)
    print(f"p={p}, det={determinant(gram)}")
    for c in sp.constituents:
        tag = "II" if c.type_two else "I"
        print(
            f"  scale 2^{c.scale_exp} rank {c.rank} type {tag}"
            f" units={c.diag_units} det_unit={c.det_unit_mod8}"
        )


# diagonal forms split on sight
show(GramMatrix.diagonal(2, 2, 18), 2)

# the A(2,2) block glued to a vector: one type-II constituent
g = GramMatrix(((2, 1, 0), (1, 2, 0), (0, 0, 2)))
show(g, 2)
print("diagonalizable over Z_2:", is_diagonalizable2(g))
print("anisotropic at 2:", is_anisotropic2(g))
print()

# the same lattice in two bases: per-block unit classes can differ when
# scales sit within distance 2 of each other, only their product is pinned
a = GramMatrix(((54, 16, 16), (16, 27, 19), (16, 19, 19)))
u = ((1, -1, 1), (-2, 4, -3), (0, 1, 0))
rows = tuple(
    tuple(
        sum(u[i][k] * a.entries[k][m] * u[j][m] for k in range(3) for m in range(3))
        for j in range(3)
    )
    for i in range(3)
)
b = GramMatrix(rows)
assert determinant(a) == determinant(b)
show(a, 2)
show(b, 2)
units_a = [c.det_unit_mod8 for c in jordan_split(a, 2).constituents]
units_b = [c.det_unit_mod8 for c in jordan_split(b, 2).constituents]
pa = pb = 1
for x in units_a:
    pa = pa * x % 8
for x in units_b:
    pb = pb * x % 8
print(f"units {units_a} vs {units_b}, products mod 8: {pa} == {pb}")
