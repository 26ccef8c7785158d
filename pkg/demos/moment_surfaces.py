"""Secant dimensions of the Gaussian moment curve-surface in degree d."""
from terracert import GaussianMoment1D, WitnessProvider, certify

prov = WitnessProvider(seed=3)
for d in (6, 9, 12, 20):
    spec = GaussianMoment1D(d)
    line = []
    for k in range(1, d // 2 + 1):
        w = prov(spec, k)
        mark = "=" if w.achieved else "<"
        line.append(f"{k}:{w.rank}{mark}{w.expected}")
    ok = [k for k in range(1, d) if certify(spec, k, provider=prov).certified]
    print(f"d={d:2d}  " + " ".join(line))
    print(f"      certified for k in {ok}")

print()
for r in certify(GaussianMoment1D(20), 7, provider=prov).reasons:
    print(" -", r)
