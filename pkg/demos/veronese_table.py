"""Which symmetric tensors of small format have defective secants.

Every (n, d, k) below is checked by witness and compared with the classical
list of exceptions.
"""
from math import comb

from terracert import Defectivity, Veronese, WitnessProvider, veronese_defectivity

for n in range(1, 6):
    for d in range(2, 6):
        N = comb(n + d, d)
        prov = WitnessProvider()
        bad = []
        for k in range(1, -(-N // (n + 1)) + 1):
            w = prov(Veronese(n, d), k)
            known = veronese_defectivity(n, d, k) is Defectivity.KNOWN_DEFECTIVE
            if not w.achieved or known:
                bad.append(f"k={k}({w.rank}/{w.expected}{'' if known else ' NEW?'})")
        print(f"n={n} d={d} N={N:3d}  " + (" ".join(bad) if bad else "non-defective"))
