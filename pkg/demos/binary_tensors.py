"""How far identifiability of binary tensors (each side 2) is certified.

For each number of factors s the sweep stops one step after the first k it
cannot certify.  The largest certified k is set against the closed form.
"""
import time

from terracert import Segre, closed_form_ip4, max_k_sweep

for s in range(5, 11):
    t = time.perf_counter()
    certs = max_k_sweep(Segre([1] * s))
    best = max(c.k for c in certs if c.certified)
    top = next(c for c in certs if c.k == best)
    print(f"s={s:2d}  certified k <= {best:3d}  closed form {closed_form_ip4(s):3d}  "
          f"via {top.theorem.value} at level {top.witness.level}  "
          f"({time.perf_counter() - t:.2f}s)")
