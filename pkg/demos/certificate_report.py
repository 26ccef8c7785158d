"""A certificate as a JSON record, and a rerun that reproduces it byte for byte.

The same record comes out of the command line:

    terracert --spec segre:1,1,1,1,1,1,1 --k 9 --seed 42 --json
"""
import json

from terracert import CertifyConfig, Segre, certify

cfg = CertifyConfig(seed=42)
first = certify(Segre([1] * 7), 9, cfg).to_json()
again = certify(Segre([1] * 7), 9, cfg).to_json()
print(json.dumps(json.loads(first), indent=2))
print("identical rerun:", first == again)

neg = certify(Segre(2, 2, 5), 5, cfg)
print(neg.verdict.value)
for r in neg.reasons:
    print(" -", r)
