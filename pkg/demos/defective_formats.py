"""Rank deficits of Terracini matrices for a few classically defective formats.

A deficit over F_p is only evidence; the last block re-derives one rank over
the rationals at an integer point.
"""
from terracert import Segre, Veronese, sample_point, secant_dim_witness, terracini_matrix

cases = [
    (Segre(1, 1, 1, 1), 3),   # 2x2x2x2 tensors of rank 3
    (Segre(2, 2, 2), 4),      # 3x3x3 tensors of rank 4
    (Veronese(2, 4), 5),      # plane quartics, five powers of linear forms
    (Veronese(4, 3), 7),
]

for spec, k in cases:
    w = secant_dim_witness(spec, k)
    print(f"{str(spec):16s} k={k:<2d} rank {w.rank:3d} of {w.expected:3d}  "
          f"deficit {w.deficit}  prime {w.prime}")

# the same answer with exact fractions
spec, k = Segre(1, 1, 1, 1), 3
pts = [sample_point(spec, (1, i), None) for i in range(k)]
m = terracini_matrix(spec, pts)
print("rational rank:", m.rank(), "rows:", m.rows.shape[0], "cols:", m.rows.shape[1])
