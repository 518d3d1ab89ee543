"""Batch verification commands: enumerate, certify, lyapunov, orbit, pisot-check.

Reports serialize to a versioned JSON schema (schema_version 1): exact
rationals appear as "p/q" strings, floats carry 12 significant digits.
Exit codes: 0 verified, 1 verification mismatch, 2 usage error, 3 resource
cap exceeded.  Output assembly is canonical (words sorted by length then
lexicographically, trials by index), so --threads never changes bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .charpoly import pisot_check
from .cones import Cone, cone_to_json, image_domain, standard_domain
from .dynamics import BernoulliSpec, StepFailure, lyapunov_estimate, orbit, periodic_lyapunov
from .intmat import (
    ExactMatrix,
    Family,
    Word,
    alphabet,
    family_generator,
    format_word,
    is_primitive,
    load_matrix_text,
    parse_word,
    product,
    transpose,
)
from .seminorm import cone_seminorm_certify

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

# Sign-significance floor for the Pisot-spectrum exit test; absorbs float
# noise around exponents that are exactly zero (unipotent streams).
_SPECTRUM_EPS = 1e-9

_ORACLE_TOL = 1e-9


def _f12(x: float) -> float:
    return float(f"{x:.12g}")


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _interval(pair: tuple[float, float] | None) -> list[float] | None:
    if pair is None:
        return None
    return [_f12(pair[0]), _f12(pair[1])]


def _letters_expected(family: Family, dim: int, letters: tuple[int, ...]) -> bool:
    if family is Family.FS:
        return set(letters) == set(alphabet(family, dim))
    return 3 in letters


def _oracle_verdict(m: ExactMatrix, exact_pisot: bool) -> str:
    moduli = np.sort(np.abs(np.linalg.eigvals(np.array(m.entries, dtype=float))))[::-1]
    if np.any(np.abs(moduli - 1.0) <= _ORACLE_TOL):
        return "ambiguous"
    float_pisot = bool(moduli[0] > 1.0 and np.all(moduli[1:] < 1.0))
    return "agree" if float_pisot == exact_pisot else "disagree"


def _word_record(
    family: Family,
    dim: int,
    letters: tuple[int, ...],
    matrix: ExactMatrix,
    grid: int | None,
    oracle: bool,
    bits: int,
) -> dict:
    word = Word(family, dim, letters)
    primitivity = is_primitive(matrix)
    expected = _letters_expected(family, dim, letters)
    report = pisot_check(matrix, precision_bits=bits)
    mismatch = (primitivity.primitive != expected) or (
        primitivity.primitive and not report.is_pisot
    )
    record = {
        "word": format_word(word),
        "length": len(letters),
        "primitive": primitivity.primitive,
        "exponent": primitivity.exponent,
        "primitive_expected": expected,
        "pisot": report.is_pisot,
        "reason": report.reason,
        "counts": list(report.counts) if report.counts else None,
        "det": report.det,
        "lambda1": _interval(report.lambda1),
        "lambda2_modulus": _interval(report.lambda2_modulus),
        "mismatch": mismatch,
    }
    if grid is not None:
        base = standard_domain(family, dim)
        cone = Cone(dim, tuple(matrix.apply(ray) for ray in base.rays))
        cert = cone_seminorm_certify(transpose(matrix), cone, grid)
        record["seminorm"] = {
            "grid": grid,
            "max_value": _frac_str(cert.max_value),
            "verdict": cert.verdict,
        }
    else:
        record["seminorm"] = None
    record["oracle"] = _oracle_verdict(matrix, report.is_pisot) if oracle else None
    return record


def _enumerate_subtree(args: tuple) -> list[dict]:
    family_value, dim, first_letter, max_len, grid, oracle, bits = args
    family = Family(family_value)
    records: list[dict] = []

    def walk(letters: tuple[int, ...], matrix: ExactMatrix) -> None:
        records.append(_word_record(family, dim, letters, matrix, grid, oracle, bits))
        if len(letters) < max_len:
            for a in alphabet(family, dim):
                walk(letters + (a,), matrix @ family_generator(family, dim, a))

    walk((first_letter,), family_generator(family, dim, first_letter))
    return records


def _sort_key(record: dict) -> tuple:
    word = parse_word(record["word"])
    return (record["length"], word.letters)


def run_enumerate(
    family: Family,
    dim: int,
    max_len: int,
    grid: int | None = None,
    oracle: bool = False,
    threads: int = 1,
    max_words: int = 10**6,
    bits: int = 40,
) -> tuple[dict, int]:
    k = len(alphabet(family, dim))
    total = sum(k**n for n in range(1, max_len + 1))
    if total > max_words:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "enumerate",
            "error": f"{total} words exceed the cap of {max_words}",
        }
        return payload, EXIT_RESOURCE
    jobs = [(family.value, dim, a, max_len, grid, oracle, bits) for a in alphabet(family, dim)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
            chunks = list(pool.map(_enumerate_subtree, jobs))
    else:
        chunks = [_enumerate_subtree(job) for job in jobs]
    records = sorted((r for chunk in chunks for r in chunk), key=_sort_key)
    mismatches = sum(1 for r in records if r["mismatch"])
    summary = {"words_checked": len(records), "mismatches": mismatches}
    if oracle:
        summary["oracle_disagreements"] = sum(1 for r in records if r["oracle"] == "disagree")
        summary["oracle_ambiguous"] = sum(1 for r in records if r["oracle"] == "ambiguous")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "enumerate",
        "family": family.value,
        "dim": dim,
        "max_len": max_len,
        "records": records,
        "summary": summary,
    }
    return payload, EXIT_OK if mismatches == 0 else EXIT_MISMATCH


def run_certify(
    family: Family, dim: int, grid: int, words: list[Word] | None = None
) -> tuple[dict, int]:
    certificates = []
    targets: list[tuple[str, Cone, ExactMatrix]] = []
    for a in alphabet(family, dim):
        gen = family_generator(family, dim, a)
        if family is Family.FS:
            cone = standard_domain(family, dim)
            cone_name = "D"
        else:
            cone = image_domain(Word(family, dim, (a,)))
            cone_name = f"D^({a})"
        targets.append((f"letter:{a}|{cone_name}", cone, gen))
    for word in words or []:
        m = product(word)
        cone = image_domain(word)
        targets.append((f"word:{format_word(word)}|D^(w)", cone, m))
    for label, cone, matrix in targets:
        cert = cone_seminorm_certify(transpose(matrix), cone, grid, label=label)
        target, cone_name = label.split("|")
        certificates.append(
            {
                "target": target,
                "cone": cone_name,
                "rays": cone_to_json(cone),
                "grid": grid,
                "max_value": _frac_str(cert.max_value),
                "worst_mu": [_frac_str(x) for x in cert.worst_point.mu],
                "verdict": cert.verdict,
            }
        )
    violations = sum(1 for c in certificates if c["verdict"] == "violation")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "certify",
        "family": family.value,
        "dim": dim,
        "grid": grid,
        "certificates": certificates,
        "violations": violations,
    }
    return payload, EXIT_OK if violations == 0 else EXIT_MISMATCH


def run_lyapunov(
    family: Family,
    weights: list[Fraction] | None,
    word: Word | None,
    steps: int,
    trials: int,
    seed: int,
    method: str,
    dim: int | None,
    threads: int = 1,
) -> tuple[dict, int]:
    if word is not None:
        estimate = periodic_lyapunov(word)
        source = {"word": format_word(word)}
    else:
        assert weights is not None
        spec = BernoulliSpec(tuple(weights), seed)
        estimate = lyapunov_estimate(
            family, spec, steps, trials, dim=dim, method=method, workers=threads
        )
        source = {"weights": [_frac_str(w) for w in spec.weights], "seed": seed}
    pisot_spectrum = (
        estimate.gamma1 - 2.58 * estimate.stderr1 > _SPECTRUM_EPS
        and estimate.gamma2 + 2.58 * estimate.stderr2 < -_SPECTRUM_EPS
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "lyapunov",
        "family": family.value,
        **source,
        "steps": estimate.steps,
        "trials": estimate.trials,
        "method": estimate.method,
        "gamma1": _f12(estimate.gamma1),
        "gamma2": _f12(estimate.gamma2),
        "stderr1": _f12(estimate.stderr1),
        "stderr2": _f12(estimate.stderr2),
        "pisot_spectrum": pisot_spectrum,
    }
    return payload, EXIT_OK if pisot_spectrum else EXIT_MISMATCH


def run_orbit(family: Family, point: list[Fraction], steps: int) -> tuple[dict, int]:
    trace = orbit(family, point, steps)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "orbit",
        "family": family.value,
        "start": [_frac_str(x) for x in trace.start],
        "steps": [
            {"letter": letter, "point": [_frac_str(x) for x in pt]}
            for letter, pt in trace.steps
        ],
        "terminated": trace.terminated,
    }
    return payload, EXIT_OK


def run_pisot_check(matrix: ExactMatrix, bits: int = 40) -> tuple[dict, int]:
    report = pisot_check(matrix, precision_bits=bits)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "pisot-check",
        "dim": matrix.dim,
        "is_pisot": report.is_pisot,
        "reason": report.reason,
        "counts": list(report.counts) if report.counts else None,
        "det": report.det,
        "lambda1": _interval(report.lambda1),
        "lambda2_modulus": _interval(report.lambda2_modulus),
        "char_poly": " ".join(str(c) for c in report.polynomial.coefficients),
    }
    return payload, EXIT_OK if report.is_pisot else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# output rendering


def _emit_json(payload: dict, out) -> None:
    json.dump(payload, out, indent=2)
    out.write("\n")


_CSV_FIELDS = {
    "enumerate": (
        "word length primitive exponent primitive_expected pisot reason det mismatch "
        "lambda1_lo lambda1_hi lambda2_lo lambda2_hi"
    ).split(),
    "certify": "target cone grid max_value verdict".split(),
    "lyapunov": "family steps trials method gamma1 gamma2 stderr1 stderr2 pisot_spectrum".split(),
    "orbit": "index letter point".split(),
    "pisot-check": "dim is_pisot reason det char_poly".split(),
}


def _csv_rows(payload: dict) -> list[dict]:
    command = payload["command"]
    if command == "enumerate":
        rows = []
        for r in payload["records"]:
            rows.append(
                {
                    "word": r["word"],
                    "length": r["length"],
                    "primitive": r["primitive"],
                    "exponent": r["exponent"],
                    "primitive_expected": r["primitive_expected"],
                    "pisot": r["pisot"],
                    "reason": r["reason"],
                    "det": r["det"],
                    "mismatch": r["mismatch"],
                    "lambda1_lo": r["lambda1"][0] if r["lambda1"] else "",
                    "lambda1_hi": r["lambda1"][1] if r["lambda1"] else "",
                    "lambda2_lo": r["lambda2_modulus"][0] if r["lambda2_modulus"] else "",
                    "lambda2_hi": r["lambda2_modulus"][1] if r["lambda2_modulus"] else "",
                }
            )
        return rows
    if command == "certify":
        return [
            {k: c[k] for k in _CSV_FIELDS["certify"]}
            for c in payload["certificates"]
        ]
    if command == "lyapunov":
        return [{k: payload[k] for k in _CSV_FIELDS["lyapunov"]}]
    if command == "orbit":
        return [
            {"index": i + 1, "letter": s["letter"], "point": ",".join(s["point"])}
            for i, s in enumerate(payload["steps"])
        ]
    return [{k: payload[k] for k in _CSV_FIELDS["pisot-check"]}]


def _emit_csv(payload: dict, out) -> None:
    if "error" in payload:
        out.write(f"error,{payload['error']}\n")
        return
    writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS[payload["command"]])
    writer.writeheader()
    for row in _csv_rows(payload):
        writer.writerow(row)


def _emit_table(payload: dict, out) -> None:
    command = payload["command"]
    if "error" in payload:
        out.write(f"error: {payload['error']}\n")
        return
    if command == "enumerate":
        out.write(
            f"enumerate {payload['family']} d={payload['dim']} max_len={payload['max_len']}\n"
        )
        header = f"{'word':<28} {'prim':<5} {'expect':<6} {'pisot':<5} {'reason':<22} mismatch"
        out.write(header + "\n")
        for r in payload["records"]:
            out.write(
                f"{r['word']:<28} {str(r['primitive']):<5} {str(r['primitive_expected']):<6} "
                f"{str(r['pisot']):<5} {r['reason']:<22} {r['mismatch']}\n"
            )
        s = payload["summary"]
        out.write(f"words checked: {s['words_checked']}  mismatches: {s['mismatches']}\n")
        if "oracle_disagreements" in s:
            out.write(
                f"oracle disagreements: {s['oracle_disagreements']}"
                f"  ambiguous: {s['oracle_ambiguous']}\n"
            )
    elif command == "certify":
        out.write(f"certify {payload['family']} d={payload['dim']} grid={payload['grid']}\n")
        for c in payload["certificates"]:
            out.write(
                f"{c['target']:<24} {c['cone']:<8} max={c['max_value']:<12} {c['verdict']}\n"
            )
        out.write(f"violations: {payload['violations']}\n")
    elif command == "lyapunov":
        out.write(
            f"lyapunov {payload['family']} method={payload['method']} "
            f"steps={payload['steps']} trials={payload['trials']}\n"
        )
        out.write(
            f"gamma1 = {payload['gamma1']:+.6f} (stderr {payload['stderr1']:.2e})\n"
            f"gamma2 = {payload['gamma2']:+.6f} (stderr {payload['stderr2']:.2e})\n"
            f"pisot spectrum: {payload['pisot_spectrum']}\n"
        )
    elif command == "orbit":
        out.write(f"orbit {payload['family']} start=({', '.join(payload['start'])})\n")
        for i, s in enumerate(payload["steps"]):
            out.write(f"{i + 1:>4}  letter {s['letter']}  ({', '.join(s['point'])})\n")
        out.write(f"terminated: {payload['terminated']}\n")
    else:
        for key in ("is_pisot", "reason", "counts", "det", "lambda1", "lambda2_modulus", "char_poly"):
            out.write(f"{key}: {payload[key]}\n")


def _emit(payload: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        _emit_json(payload, out)
    elif fmt == "csv":
        _emit_csv(payload, out)
    else:
        _emit_table(payload, out)


# ---------------------------------------------------------------------------
# argument parsing


def _add_format_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="emit JSON")
    group.add_argument("--csv", action="store_true", help="emit CSV")


def _default_threads() -> int:
    env = os.environ.get("PISOTLAB_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pisotlab",
        description="Exact Pisot verification for fully subtractive and Brun matrix products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser(
        "enumerate", help="check primitivity and the Pisot property word by word"
    )
    p_enum.add_argument("family", type=str)
    p_enum.add_argument("dim", type=int)
    p_enum.add_argument("--max-len", type=int, required=True)
    p_enum.add_argument("--grid", type=int, default=None,
                        help="also certify each word's seminorm on this grid")
    p_enum.add_argument("--oracle", action="store_true",
                        help="cross-check verdicts against a floating eigensolver")
    p_enum.add_argument("--threads", type=int, default=_default_threads())
    p_enum.add_argument("--max-words", type=int, default=10**6)
    p_enum.add_argument("--bits", type=int, default=40)
    _add_format_flags(p_enum)

    p_cert = sub.add_parser("certify", help="grid-certify the letter seminorm bounds")
    p_cert.add_argument("family", type=str)
    p_cert.add_argument("dim", type=int, nargs="?", default=3)
    p_cert.add_argument("--grid", type=int, default=12)
    p_cert.add_argument("--word", action="append", default=[],
                        help="also certify this word over its image cone (repeatable)")
    _add_format_flags(p_cert)

    p_lyap = sub.add_parser("lyapunov", help="estimate the top two Lyapunov exponents")
    p_lyap.add_argument("family", type=str)
    p_lyap.add_argument("--weights", type=str, default=None,
                        help="comma-separated rational letter weights")
    p_lyap.add_argument("--word", type=str, default=None,
                        help="periodic mode: exact exponents of this word")
    p_lyap.add_argument("--steps", type=int, default=10**6)
    p_lyap.add_argument("--trials", type=int, default=20)
    p_lyap.add_argument("--seed", type=int, default=0)
    p_lyap.add_argument("--method", choices=("exterior_power", "seminorm_track"),
                        default="exterior_power")
    p_lyap.add_argument("--dim", type=int, default=None)
    p_lyap.add_argument("--threads", type=int, default=_default_threads())
    _add_format_flags(p_lyap)

    p_orbit = sub.add_parser("orbit", help="run an exact continued-fraction orbit")
    p_orbit.add_argument("family", type=str)
    p_orbit.add_argument("point", type=str, help="comma-separated positive rationals")
    p_orbit.add_argument("--steps", type=int, default=10)
    _add_format_flags(p_orbit)

    p_pisot = sub.add_parser("pisot-check", help="check one matrix from the text format")
    p_pisot.add_argument("matrix", type=str, help="path to a matrix text file, or - for stdin")
    p_pisot.add_argument("--bits", type=int, default=40)
    _add_format_flags(p_pisot)

    return parser


def _fmt_of(args: argparse.Namespace) -> str:
    if args.json:
        return "json"
    if args.csv:
        return "csv"
    return "table"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        family = Family.parse(args.family) if hasattr(args, "family") else None
    except ValueError as err:
        parser.error(str(err))
    try:
        if args.command == "enumerate":
            if args.max_len < 1:
                parser.error("--max-len must be at least 1")
            payload, code = run_enumerate(
                family, args.dim, args.max_len,
                grid=args.grid, oracle=args.oracle, threads=args.threads,
                max_words=args.max_words, bits=args.bits,
            )
        elif args.command == "certify":
            words = [parse_word(w) for w in args.word]
            payload, code = run_certify(family, args.dim, args.grid, words)
        elif args.command == "lyapunov":
            word = parse_word(args.word) if args.word else None
            weights = None
            if word is None:
                if args.weights is None:
                    parser.error("provide --weights or --word")
                weights = [Fraction(tok) for tok in args.weights.split(",")]
            payload, code = run_lyapunov(
                family, weights, word, args.steps, args.trials,
                args.seed, args.method, args.dim, threads=args.threads,
            )
        elif args.command == "orbit":
            point = [Fraction(tok) for tok in args.point.split(",")]
            payload, code = run_orbit(family, point, args.steps)
        else:  # pisot-check
            text = sys.stdin.read() if args.matrix == "-" else open(args.matrix).read()
            payload, code = run_pisot_check(load_matrix_text(text), bits=args.bits)
    except (ValueError, OSError, StepFailure) as err:
        parser.exit(EXIT_USAGE, f"pisotlab: error: {err}\n")
    _emit(payload, _fmt_of(args))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
