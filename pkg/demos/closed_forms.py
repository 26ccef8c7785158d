"""The integer bounds that need no linear algebra at all."""
from terracert import closed_form_ip4, ii1_bound, unbalanced_check
from terracert.certify import e1_kmax, ii2_bound, ii2_kmax

print("binary, s factors:", {s: closed_form_ip4(s) for s in range(5, 13)})
print("equal sides m+1, s factors:",
      {(m, s): e1_kmax(m, s) for m in (2, 3, 4) for s in (3, 4, 5)})

# a split of the degrees (3, 3) into (2, 2) + (1, 1)
print("II2 on P1 x P1 in bidegree (3,3):", ii2_bound((1, 1), (3, 3), (2, 2), (1, 1)))
print("best split:", ii2_kmax((1, 1), (3, 3)))
print("II1 examples:", ii1_bound(4, 10, 2), ii1_bound(100, 5, 2))

for dims in [(6, 2, 2), (5, 2, 2), (5, 1, 1, 1), (2, 2, 5)]:
    print(dims, "unbalanced" if unbalanced_check(dims) else "balanced")
