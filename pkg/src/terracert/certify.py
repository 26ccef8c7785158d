"""Identifiability certificates for secant varieties.

Witness-backed paths need the stacked tangent spaces at ``k + n - 1``
random points to have full rank ``(k + n - 1)(n + 1) < r + 1``; together
with a side condition (no covering lines, or matching Segre factors) this
rules out weak defectivity at every j <= k.  For Segre products the rank
condition alone gives identifiability at every j <= k.  Closed forms cover
binary tensors, cubic products (P^m)^s and a characteristic-free bound for
Segre-Veronese embeddings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from math import comb, prod
from typing import Callable, Iterator

from . import __version__
from .linalg import DEFAULT_PRIME
from .terracini import Witness, WitnessProvider
from .varieties import (GaussianMoment1D, SegreVeronese, VarietySpec, ambient,
                        format_spec, is_uniruled_by_lines)

WitnessFn = Callable[[VarietySpec, int], Witness]


class TheoremId(str, Enum):
    IP1 = "IP1"        # no covering lines + rank condition
    IP3 = "IP3"        # Segre, every factor dimension repeated + rank condition
    IP5 = "IP5"        # Segre-Veronese with matched linear factors + rank condition
    IPX = "IPX"        # Segre + rank condition, identifiability only
    IP4_CLOSED = "IP4_CLOSED"
    E1_CLOSED = "E1_CLOSED"
    II2_CLOSED = "II2_CLOSED"
    II1_BOUND = "II1_BOUND"


class Verdict(str, Enum):
    CERTIFIED_NOT_WEAKLY_DEFECTIVE = "certified_not_weakly_defective"
    CERTIFIED_IDENTIFIABLE = "certified_identifiable"
    INCONCLUSIVE = "inconclusive"
    OBSERVED_DEFECTIVE = "observed_defective"


class Defectivity(str, Enum):
    NON_DEFECTIVE = "non_defective"
    KNOWN_DEFECTIVE = "known_defective"


@dataclass
class Certificate:
    spec: VarietySpec
    k: int
    verdict: Verdict
    theorem: TheoremId | None = None
    evidence: str | None = None  # witness-backed | literature-backed | char-free | implied
    witness: Witness | None = None
    bounds: dict = field(default_factory=dict)
    reasons: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def certified(self) -> bool:
        return self.verdict in (Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE,
                                Verdict.CERTIFIED_IDENTIFIABLE)

    @property
    def probabilistic(self) -> bool:
        return self.verdict is Verdict.OBSERVED_DEFECTIVE

    def to_record(self) -> dict:
        return {
            "spec_string": format_spec(self.spec),
            "k": self.k,
            "verdict": self.verdict.value,
            "theorem": self.theorem.value if self.theorem else None,
            "evidence": self.evidence,
            "probabilistic": self.probabilistic,
            "witness": self.witness.to_record() if self.witness else None,
            "bounds": dict(self.bounds),
            "reasons": list(self.reasons),
            "tool_version": self.tool_version,
            "config": dict(self.config),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def _config_of(provider) -> dict:
    cfg = getattr(provider, "config", None)
    return cfg() if callable(cfg) else {}


@dataclass
class NumericCondition:
    holds: bool
    level: int
    expected_dim: int  # (level)(n + 1) - 1
    r: int
    witness: Witness | None = None
    reason: str | None = None


def numeric_condition(spec: VarietySpec, k: int, provider: WitnessFn,
                      max_rows: int | None = None) -> NumericCondition:
    """Check dim sigma_{k+n-1}(X) = (k+n-1)(n+1) - 1 < r by an exact witness.

    The inequality is checked first and no witness is run when it fails.
    ``max_rows`` caps the Terracini matrix height; above it the witness is
    skipped and the condition reported as not established.
    """
    if k < 1:
        raise ValueError("k must be positive")
    a = ambient(spec)
    level = k + a.n - 1
    dim = level * (a.n + 1) - 1
    if not dim < a.r:
        return NumericCondition(False, level, dim, a.r, None,
                                f"numeric condition fails at level {level}: "
                                f"{level}*{a.n + 1}-1 = {dim} is not < r = {a.r}")
    if max_rows is not None and level * (a.n + 1) > max_rows:
        return NumericCondition(False, level, dim, a.r, None,
                                f"witness at level {level} skipped: {level * (a.n + 1)} rows "
                                f"exceed the budget of {max_rows}")
    w = provider(spec, level)
    if not w.achieved:
        return NumericCondition(False, level, dim, a.r, w,
                                f"witness deficit at level {level}: rank {w.rank} "
                                f"< expected {w.expected} (probabilistic)")
    return NumericCondition(True, level, dim, a.r, w)


def _gauss_note(spec: VarietySpec, k: int) -> list[str]:
    if not isinstance(spec, GaussianMoment1D):
        return []
    d = spec.d
    note = ("moment surface: the wider range 2(k+1) < d is not applied; "
            "certification uses 3(k+1)-1 < d")
    if 2 * (k + 1) < d and not 3 * (k + 1) - 1 < d:
        note += f"; k={k} satisfies 2(k+1) < {d} only, so it stays uncertified here"
    return [note]


def _witness_cert(spec, k, provider, theorem, verdict, max_rows=None):
    nc = numeric_condition(spec, k, provider, max_rows)
    bounds = {"n": ambient(spec).n, "r": nc.r, "level": nc.level, "expected_dim": nc.expected_dim}
    if nc.holds:
        return Certificate(spec, k, verdict, theorem, "witness-backed", nc.witness, bounds,
                           _gauss_note(spec, k), _config_of(provider)), nc
    return Certificate(spec, k, Verdict.INCONCLUSIVE, None, None, nc.witness, bounds,
                       [f"{theorem.value}: {nc.reason}"], _config_of(provider)), nc


def _inconclusive(spec, k, provider, reason):
    return Certificate(spec, k, Verdict.INCONCLUSIVE, reasons=[reason],
                       config=_config_of(provider))


def certify_ip1(spec: VarietySpec, k: int, provider: WitnessFn, *, max_rows=None) -> Certificate:
    if is_uniruled_by_lines(spec):
        return _inconclusive(spec, k, provider, "IP1: variety may be uniruled by lines")
    return _witness_cert(spec, k, provider, TheoremId.IP1,
                         Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE, max_rows)[0]


def _every_dim_repeated(dims) -> bool:
    return all(list(dims).count(x) >= 2 for x in dims)


def certify_ip3(spec: VarietySpec, k: int, provider: WitnessFn, *, max_rows=None) -> Certificate:
    if not (isinstance(spec, SegreVeronese) and spec.is_segre):
        return _inconclusive(spec, k, provider, "IP3: wrong family (Segre only)")
    reasons = []
    if not _every_dim_repeated(spec.dims):
        lone = sorted(x for x in set(spec.dims) if spec.dims.count(x) == 1)
        reasons.append(f"IP3: factor dimensions {lone} occur only once")
    cert, _ = _witness_cert(spec, k, provider, TheoremId.IP3,
                            Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE, max_rows)
    if reasons:
        if cert.certified:
            cert = replace(cert, verdict=Verdict.INCONCLUSIVE, theorem=None, evidence=None,
                           reasons=[])
        cert.reasons = reasons + cert.reasons
    return cert


def _linear_factors_matched(spec: SegreVeronese) -> bool:
    lin = [n for n, d in zip(spec.dims, spec.degs) if d == 1]
    return all(lin.count(x) >= 2 for x in lin)


def certify_ip5(spec: VarietySpec, k: int, provider: WitnessFn, *, max_rows=None) -> Certificate:
    if not isinstance(spec, SegreVeronese):
        return _inconclusive(spec, k, provider, "IP5: wrong family (Segre-Veronese only)")
    if not _linear_factors_matched(spec):
        return _inconclusive(spec, k, provider,
                             "IP5: a degree-1 factor has no partner of equal dimension")
    return _witness_cert(spec, k, provider, TheoremId.IP5,
                         Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE, max_rows)[0]


def certify_ipx(spec: VarietySpec, k: int, provider: WitnessFn, *, max_rows=None) -> Certificate:
    if not (isinstance(spec, SegreVeronese) and spec.is_segre):
        return _inconclusive(spec, k, provider, "IPX: wrong family (Segre only)")
    return _witness_cert(spec, k, provider, TheoremId.IPX,
                         Verdict.CERTIFIED_IDENTIFIABLE, max_rows)[0]


def closed_form_ip4(s: int) -> int:
    """Largest k with (k+s-1)(s+1) <= 2**s - 1 for (P^1)^s, or 0."""
    if s < 5:
        raise ValueError("binary closed form needs s >= 5")
    return max(0, (2**s - 1) // (s + 1) - s + 1)


def _e1_a(m: int, s: int) -> tuple[int, int]:
    a = (m + 1) ** s // (m * s + 1)
    return a, a % (m + 1)


def closed_form_e1(m: int, s: int, k: int) -> bool:
    """Cubic-format criterion for (P^m)^s, m >= 2."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if k < 1:
        return False
    total = (m + 1) ** s
    a, eps = _e1_a(m, s)
    if eps > 0:
        a1 = a - eps
    elif (m * s + 1) * a == total:
        a1 = a - 1
    elif (k + m * s) * (s * m + 1) <= total - 1:
        a1 = a
    else:
        a1 = None
    ok = a1 is not None and k + m * s - 1 <= a1
    if s == 3 and 3 * m * (k + 3 * m - 1) < total:
        ok = True
    return ok


def e1_kmax(m: int, s: int) -> int:
    a, _ = _e1_a(m, s)
    hi = a + 2 if s != 3 else (m + 1) ** 3
    return max((k for k in range(1, hi + 1) if closed_form_e1(m, s, k)), default=0)


def unbalanced_margin(dims) -> int:
    """a_1 - (prod_{i>=2}(a_i + 1) - sum_{i>=2} a_i) with a_1 the largest dimension."""
    if len(dims) < 2:
        raise ValueError("need at least two factors")
    a = sorted(dims, reverse=True)
    return a[0] - (prod(x + 1 for x in a[1:]) - sum(a[1:]))


def unbalanced_check(dims) -> bool:
    return unbalanced_margin(dims) > 0


def ii1_bound(h0R: int, dimV: int, n: int) -> int:
    if min(h0R, dimV, n) < 1:
        raise ValueError("inputs must be positive")
    return max(0, min(h0R, dimV - n - 2))


def _check_split(dims, degs, b, c):
    if not (len(dims) == len(degs) == len(b) == len(c)):
        raise ValueError("split length mismatch")
    if any(x < 1 for x in b) or any(x < 0 for x in c):
        raise ValueError("need b_i >= 1 and c_i >= 0")
    if any(bi + ci != d for bi, ci, d in zip(b, c, degs)):
        raise ValueError("need b_i + c_i = d_i")
    if not any(c):
        raise ValueError("need c_j > 0 for some j")


def ii2_bound(dims, degs, b, c) -> int:
    _check_split(dims, degs, b, c)
    dimV = prod(comb(n + bi, n) for n, bi in zip(dims, b))
    h0R = prod(comb(n + ci, n) for n, ci in zip(dims, c))
    return min(dimV - 2 - sum(dims), h0R)


def closed_form_ii2(dims, degs, b, c, k: int) -> bool:
    return k >= 1 and k <= ii2_bound(dims, degs, b, c)


def _splits(degs) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    def rec(i):
        if i == len(degs):
            yield (), ()
            return
        for bi in range(1, degs[i] + 1):
            for b, c in rec(i + 1):
                yield (bi,) + b, (degs[i] - bi,) + c
    for b, c in rec(0):
        if any(c):
            yield b, c


def ii2_kmax(dims, degs) -> tuple[int, tuple | None]:
    """Best bound over all valid splits, floored at 0, with the split attaining it."""
    best, arg = 0, None
    for b, c in _splits(tuple(degs)):
        v = ii2_bound(dims, degs, b, c)
        if v > best or arg is None and v == best:
            best, arg = max(v, best), (b, c)
    return best, arg


#: Defective secant varieties of Veronese embeddings beyond the quadric band.
AH_EXCEPTIONS = ((2, 4, 5), (3, 4, 9), (4, 3, 7), (4, 4, 14))


def veronese_defectivity(n: int, d: int, k: int) -> Defectivity:
    if d < 2:
        raise ValueError("d must be at least 2")
    if d == 2 and 2 <= k <= n or (n, d, k) in AH_EXCEPTIONS:
        return Defectivity.KNOWN_DEFECTIVE
    return Defectivity.NON_DEFECTIVE


@dataclass
class CertifyConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    max_retries: int = 3
    char_free: bool = False
    max_witness_rows: int | None = None

    def provider(self) -> WitnessProvider:
        return WitnessProvider(self.prime, self.seed, self.max_retries)


def _closed_forms(spec, k, provider, deficits, reasons) -> Certificate | None:
    cfg = _config_of(provider)
    if isinstance(spec, SegreVeronese) and spec.is_segre and len(set(spec.dims)) == 1:
        m, s = spec.dims[0], spec.s
        if m == 1 and s >= 5:
            kmax = closed_form_ip4(s)
            lvl = k + s - 1
            if k <= kmax and lvl not in deficits:
                return Certificate(spec, k, Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE,
                                   TheoremId.IP4_CLOSED, "literature-backed", None,
                                   {"ip4_kmax": kmax},
                                   ["binary closed form uses (k+s-1)(s+1) <= 2^s-1"], cfg)
            reasons.append(f"IP4_CLOSED: k={k} exceeds {kmax}" if k > kmax else
                           f"IP4_CLOSED: blocked by observed deficit at level {lvl}")
        elif m >= 2:
            kmax = e1_kmax(m, s)
            lvl = k + m * s - 1
            if closed_form_e1(m, s, k) and lvl not in deficits:
                return Certificate(spec, k, Verdict.CERTIFIED_NOT_WEAKLY_DEFECTIVE,
                                   TheoremId.E1_CLOSED, "literature-backed", None,
                                   {"e1_kmax": kmax}, [], cfg)
            reasons.append(f"E1_CLOSED: k={k} exceeds {kmax}" if k > kmax else
                           f"E1_CLOSED: blocked by observed deficit at level {lvl}")
    cert = _char_free(spec, k, provider)
    if cert.certified:
        return cert
    reasons.extend(cert.reasons)
    return None


def _char_free(spec, k, provider) -> Certificate:
    cfg = _config_of(provider)
    if not isinstance(spec, SegreVeronese) or max(spec.degs) < 2:
        return _inconclusive(spec, k, provider, "II2_CLOSED: needs some degree d_i >= 2")
    kmax, split = ii2_kmax(spec.dims, spec.degs)
    bounds = {"ii2_kmax": kmax}
    if split is not None:
        b, c = split
        dimV = prod(comb(n + bi, n) for n, bi in zip(spec.dims, b))
        h0R = prod(comb(n + ci, n) for n, ci in zip(spec.dims, c))
        bounds.update(ii2_split_b=list(b), ii2_split_c=list(c),
                      ii1_bound=ii1_bound(h0R, dimV, sum(spec.dims)))
    if k <= kmax:
        return Certificate(spec, k, Verdict.CERTIFIED_IDENTIFIABLE, TheoremId.II2_CLOSED,
                           "char-free", None, bounds, [], cfg)
    return Certificate(spec, k, Verdict.INCONCLUSIVE, None, None, None, bounds,
                       [f"II2_CLOSED: k={k} exceeds {kmax}"], cfg)


def _diagnostics(spec) -> list[str]:
    if not (isinstance(spec, SegreVeronese) and spec.is_segre and spec.s >= 2):
        return []
    a = sorted(spec.dims, reverse=True)
    margin = unbalanced_margin(a)
    rhs = prod(x + 1 for x in a[1:]) - sum(a[1:])
    if margin > 0:
        return [f"unbalanced diagnostic: {a[0]} > {rhs}"]
    if margin == 0:
        return [f"almost-unbalanced diagnostic: largest dimension {a[0]} equals {rhs}"]
    return []


def certify(spec: VarietySpec, k: int, config: CertifyConfig | None = None,
            provider: WitnessFn | None = None) -> Certificate:
    """Strongest available certificate for k-identifiability of ``spec``."""
    if k < 1:
        raise ValueError("k must be positive")
    config = config or CertifyConfig()
    provider = provider or config.provider()
    ambient(spec)
    if config.char_free:
        cert = _char_free(spec, k, provider)
        cert.config["char_free"] = True
        return cert

    rows = config.max_witness_rows
    reasons: list[str] = []
    deficits: set[int] = set()

    def attempt(fn):
        cert = fn(spec, k, provider, max_rows=rows)
        if cert.witness is not None and not cert.witness.achieved:
            deficits.add(cert.witness.level)
        if not cert.certified:
            reasons.extend(r for r in cert.reasons if r not in reasons)
        return cert

    paths = [certify_ip1]
    if isinstance(spec, SegreVeronese):
        paths += [certify_ip3, certify_ipx] if spec.is_segre else [certify_ip5]
    for fn in paths:
        cert = attempt(fn)
        if cert.certified:
            return cert
    cert = _closed_forms(spec, k, provider, deficits, reasons)
    if cert is not None:
        return cert

    reasons += _diagnostics(spec) + _gauss_note(spec, k)
    cfg = _config_of(provider)
    a = ambient(spec)
    if rows is None or k * (a.n + 1) <= rows:
        w = provider(spec, k)
        if not w.achieved:
            return Certificate(spec, k, Verdict.OBSERVED_DEFECTIVE, None, "witness-backed", w,
                               {"level": k, "rank": w.rank, "deficit": w.deficit},
                               reasons, cfg)
    return Certificate(spec, k, Verdict.INCONCLUSIVE, bounds={"n": a.n, "r": a.r},
                       reasons=reasons, config=cfg)


def max_k_sweep(spec: VarietySpec, config: CertifyConfig | None = None,
                provider: WitnessFn | None = None) -> list[Certificate]:
    """Certificates for k = 1, 2, ... through one past the first uncertified k.

    A certificate at k covers every j <= k; earlier gaps are back-filled
    with the covering certificate, marked as implied.
    """
    config = config or CertifyConfig()
    provider = provider or config.provider()
    out: list[Certificate] = []
    first_fail = None
    k = 1
    while first_fail is None or k <= first_fail + 1:
        cert = certify(spec, k, config, provider)
        out.append(cert)
        if not cert.certified and first_fail is None:
            first_fail = k
        k += 1
    top = None
    for i in reversed(range(len(out))):
        cert = out[i]
        if cert.certified:
            top = top or cert
        elif top is not None:
            out[i] = replace(top, k=cert.k, evidence="implied",
                             reasons=top.reasons + [f"implied by certificate at k={top.k}"])
    return out
