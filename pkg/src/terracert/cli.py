"""Command-line front end.

Exit status: 0 certified at the requested k, 1 inconclusive, 2 observed
defective, 64 usage or parse error.  ``--sweep`` exits 0 after a complete
sweep.
"""
from __future__ import annotations

import argparse
import sys

from .certify import Certificate, CertifyConfig, Verdict, certify, max_k_sweep
from .linalg import DEFAULT_PRIME, RETRY_PRIMES, check_prime
from .varieties import SpecError, format_spec, parse_spec

EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="terracert", description="Certify identifiability of generic rank-k tensors.")
    p.add_argument("--spec", required=True,
                   help="segre:n1,.. | veronese:n,d | sv:n1,../d1,.. | gauss:d | shape:a1x..")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--k", type=int, help="rank to certify")
    mode.add_argument("--sweep", action="store_true", help="certify k = 1, 2, ... until failure")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=3)
    p.add_argument("--json", action="store_true", help="one certificate record per line")
    p.add_argument("--char-free", action="store_true",
                   help="only the characteristic-free closed-form bounds")
    p.add_argument("--output", help="write the report to this file instead of stdout")
    return p


def format_text(cert: Certificate) -> str:
    lines = [f"spec {format_spec(cert.spec)}  k={cert.k}", f"verdict: {cert.verdict.value}"]
    if cert.theorem:
        lines[-1] += f" ({cert.theorem.value}, {cert.evidence})"
    w = cert.witness
    if w is not None:
        lines.append(f"witness: level {w.level} rank {w.rank}/{w.expected} "
                     f"prime {w.prime} seed {w.seed} retries {w.retries_used}"
                     + ("" if w.achieved else f" deficit {w.deficit} (probabilistic)"))
    if cert.bounds:
        lines.append("bounds: " + " ".join(f"{k}={v}" for k, v in cert.bounds.items()))
    lines += [f"  - {r}" for r in cert.reasons]
    return "\n".join(lines)


def _exit_code(cert: Certificate) -> int:
    if cert.certified:
        return 0
    return 2 if cert.verdict is Verdict.OBSERVED_DEFECTIVE else 1


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        spec = parse_spec(args.spec)
    except SpecError as exc:
        print(f"terracert: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        prime = check_prime(args.prime, witness=True)
        if args.seed < 0:
            raise ValueError("seed must be nonnegative")
        if not 0 <= args.retries < len(RETRY_PRIMES):
            raise ValueError(f"retries must be in [0, {len(RETRY_PRIMES) - 1}]")
        if args.k is not None and args.k < 1:
            raise ValueError("k must be positive")
    except ValueError as exc:
        print(f"terracert: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = CertifyConfig(prime=prime, seed=args.seed, max_retries=args.retries,
                           char_free=args.char_free)
    if args.sweep:
        certs, code = max_k_sweep(spec, config), 0
    else:
        cert = certify(spec, args.k, config)
        certs, code = [cert], _exit_code(cert)
    if args.json:
        report = "\n".join(c.to_json() for c in certs) + "\n"
    else:
        report = "\n\n".join(format_text(c) for c in certs) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(report)
    else:
        stdout.write(report)
    return code


def main():
    sys.exit(run())
