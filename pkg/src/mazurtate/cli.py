"""Command-line surface: job configuration, subcommands, report serialization.

Exit codes: 0 success (including verdict "equal"), 1 mathematical-verdict
failure, 2 configuration error, 3 precision exhaustion.  All reports embed
the normalized job config and the code version; JSON output is canonical
(sorted keys) and byte-identical across runs for a fixed config.
"""

import argparse
import json
import math
import sys

from . import __version__
from .chars import CharGroup, DirichletChar, canonical_wild_char
from .curves import CURVES, curve
from .ellcurve import ECurve
from .errors import (BoundExceeded, ConductorError, ConductorMismatch,
                     MazurTateError, NotSubgroup, PrecisionExhausted,
                     SkippedMuPositive, ToleranceUnreachable, ZeroInput)
from .iwasawa import INFINITY, invariants, q_level, signed_scan
from .kida import KidaInstance, verify_kida, verify_tower_consistency
from .modsym import isolate_eigensymbol, symbol_space
from .oracle import check_interpolation, gauss_sum
from .theta import mazur_tate

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2
EXIT_PRECISION = 3

_CONFIG_ERRORS = (ValueError, KeyError, TypeError, AssertionError,
                  NotSubgroup, ConductorError, ConductorMismatch,
                  json.JSONDecodeError, ZeroInput)
_PRECISION_ERRORS = (PrecisionExhausted, BoundExceeded, ToleranceUnreachable)


def parse_curve(spec):
    """'11a1' from the built-in table, or JSON with ainvs and conductor."""
    if spec in CURVES:
        return curve(spec)
    data = json.loads(spec)
    spr = data.get("small_prime_reduction")
    if spr is not None:
        spr = {(int(k) if k.isdigit() else k): v for k, v in spr.items()}
    return ECurve(tuple(data["ainvs"]), data["conductor"],
                  small_prime_reduction=spr, label=data.get("label"))


def parse_field(spec, p=None):
    """Abelian field as a character group.

    Mini-language: 'Q'; 'Q(j)' for the degree-p^j layer of the cyclotomic
    tower (needs p); 'sub(m,d)' for the degree-d subfield of Q(mu_m) with
    cyclic unit group mod m; '*' composes.  A JSON object passes either
    generators {"modulus": m, "gens": [exps, ...]} or a full closed list
    {"modulus": m, "chars": [exps, ...]} (closure is validated).
    """
    spec = spec.strip()
    if spec.startswith("{"):
        data = json.loads(spec)
        m = data["modulus"]
        if "chars" in data:
            return CharGroup(m, [DirichletChar(m, e) for e in data["chars"]])
        return CharGroup.generated_by(
            m, [DirichletChar(m, e) for e in data["gens"]])
    groups = []
    for part in spec.split("*"):
        part = part.strip()
        if part == "Q":
            groups.append(CharGroup.generated_by(1, [DirichletChar.trivial(1)]))
        elif part.startswith("Q(") and part.endswith(")"):
            j = int(part[2:-1])
            if p is None:
                raise ValueError("cyclotomic-layer field spec needs p")
            assert j >= 1, "cyclotomic layer index must be >= 1"
            groups.append(CharGroup.generated_by(
                p ** (j + 1), [canonical_wild_char(p, j)]))
        elif part.startswith("sub(") and part.endswith(")"):
            m, d = (int(x) for x in part[4:-1].split(","))
            full = DirichletChar(m, [1])
            if d <= 0 or full.order % d:
                raise ValueError(f"Q(mu_{m}) has no degree-{d} subfield")
            groups.append(CharGroup.generated_by(m, [full ** (full.order // d)]))
        else:
            raise ValueError(f"unrecognized field spec component {part!r}")
    X = groups[0]
    for Y in groups[1:]:
        m = math.lcm(X.modulus, Y.modulus)
        gens = [c.extend_to_modulus(m) for c in X.chars]
        gens += [c.extend_to_modulus(m) for c in Y.chars]
        X = CharGroup.generated_by(m, gens)
    return X


def parse_psi(spec):
    """'triv', 'full(m)', 'quad(m)', 'pow(p,j)', or JSON {modulus, exps}."""
    if spec is None or spec == "triv":
        return DirichletChar.trivial(1)
    spec = spec.strip()
    if spec.startswith("{"):
        data = json.loads(spec)
        return DirichletChar(data["modulus"], data["exps"])
    if spec.startswith("full(") and spec.endswith(")"):
        return DirichletChar(int(spec[5:-1]), [1])
    if spec.startswith("quad(") and spec.endswith(")"):
        full = DirichletChar(int(spec[5:-1]), [1])
        assert full.order % 2 == 0, "no quadratic character at this modulus"
        return full ** (full.order // 2)
    if spec.startswith("pow(") and spec.endswith(")"):
        pp, j = (int(x) for x in spec[4:-1].split(","))
        return canonical_wild_char(pp, j)
    raise ValueError(f"unrecognized character spec {spec!r}")


def _inv_str(v):
    return "oo" if v == INFINITY else v


def normalized_config(args):
    cfg = {"command": args.command, "format": args.format,
           "precision": args.precision, "qexp_bound": args.qexp_bound,
           "tol": args.tol, "seed": args.seed,
           "sturm_override": args.sturm_override,
           "p1p2_convention": args.p1p2_convention,
           "version": __version__}
    for key in ("curve", "p", "n", "n_range", "M", "ell", "K", "L",
                "base_field", "psi", "i", "gauss_checks"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, (list, tuple)) and not any(
            isinstance(x, (dict, list, tuple)) for x in obj):
        out.append((prefix, ",".join(str(x) for x in obj)))
    elif isinstance(obj, (list, tuple)):
        for j, x in enumerate(obj):
            _flatten(f"{prefix}[{j}]", x, out)
    else:
        out.append((prefix, obj))


def emit(payload, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
        return
    if fmt == "tsv":
        report = payload.get("report", {})
        if isinstance(report, dict) and "rows" in report:
            rows = report["rows"]
            header = report.get("columns")
            if header:
                stream.write("\t".join(header) + "\n")
            for row in rows:
                stream.write("\t".join(str(x) for x in row) + "\n")
            return
        pairs = []
        _flatten("", payload, pairs)
        for k, v in pairs:
            stream.write(f"{k}\t{v}\n")
        return
    pairs = []
    _flatten("", payload, pairs)
    width = max((len(k) for k, _ in pairs), default=0)
    for k, v in pairs:
        stream.write(f"{k:<{width}}  {v}\n")


def cmd_space(args):
    E = parse_curve(args.curve)
    space = symbol_space(E.N)
    sym = isolate_eigensymbol(E, sturm_override=args.sturm_override)
    checked = []
    ell = 2
    while len(checked) < 5:
        if E.N % ell:
            checked.append([ell, E.a_ell(ell)])
        ell += 1
        while not _is_prime(ell):
            ell += 1
    report = {"N": E.N, "manin_symbols": len(space.p1),
              "genus": space.genus,
              "symbol_space_dim": len(space.symbol_kernel),
              "sturm_bound": space.sturm_bound(),
              "eigensymbol_isolated": True,
              "hecke_eigenvalues": checked,
              "plus_support": sum(1 for x in sym.wplus if x),
              "minus_support": sum(1 for x in sym.wminus if x)}
    return report, EXIT_OK


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def cmd_theta(args):
    E = parse_curve(args.curve)
    psi = parse_psi(args.psi)
    th = mazur_tate(E, args.p, args.n, args.M, psi)
    inv = invariants(th, args.precision)
    coeffs = [str(c.rational_value()) if c.is_rational() else repr(c)
              for c in th.t_coeffs()]
    report = {"p": args.p, "n": args.n, "M": args.M,
              "psi": list(psi.signature()),
              "t_coeffs": coeffs,
              "mu": _inv_str(inv.mu), "lambda": _inv_str(inv.lam),
              "level_bound": inv.level_bound}
    return report, EXIT_OK


def _parse_range(spec):
    if ":" in spec:
        lo, hi = (int(x) for x in spec.split(":"))
    else:
        lo = hi = int(spec)
    assert 0 <= lo <= hi
    return list(range(lo, hi + 1))


def cmd_invariants(args):
    E = parse_curve(args.curve)
    psi = parse_psi(args.psi)
    rows = []
    for n in _parse_range(args.n_range):
        inv = invariants(mazur_tate(E, args.p, n, args.M, psi), args.precision)
        rows.append([n, _inv_str(inv.mu), _inv_str(inv.lam), q_level(args.p, n)])
    report = {"columns": ["n", "mu", "lambda", "q_n"], "rows": rows}
    return report, EXIT_OK


def cmd_kida(args):
    E = parse_curve(args.curve)
    K = parse_field(args.K, args.p)
    L = parse_field(args.L, args.p)
    inst = KidaInstance(E, args.p, K, L, args.n,
                        convention=args.p1p2_convention)
    try:
        report = verify_kida(inst, B=args.precision)
    except SkippedMuPositive as exc:
        partial = getattr(exc, "report", None)
        rep = partial.to_dict() if partial is not None else {}
        rep["verdict"] = "skipped-mu-positive"
        rep["reason"] = str(exc)
        return rep, EXIT_OK
    code = EXIT_OK if report.verdict == "equal" else EXIT_VERDICT
    return report.to_dict(), code


def cmd_tower(args):
    E = parse_curve(args.curve)
    M = parse_field(args.base_field, args.p)
    K = parse_field(args.K, args.p)
    L = parse_field(args.L, args.p)
    rep = verify_tower_consistency(E, args.p, M, K, L, args.n,
                                   B=args.precision,
                                   convention=args.p1p2_convention)
    return rep.to_dict(), EXIT_OK if rep.ok else EXIT_VERDICT


def cmd_signed(args):
    levels = tuple(_parse_range(args.n_range))
    try:
        hits = signed_scan(CURVES, args.p, levels=levels, B=args.precision)
    except AssertionError as exc:
        # an a_p = 0 curve whose growth rows violate constancy or mu = 0 is a
        # mathematical-verdict failure, not a configuration problem
        raise MazurTateError(f"signed growth check failed: {exc}") from exc
    rows = []
    for label, const, triples in hits:
        for n, mu, lam in triples:
            rows.append([label, const, n, _inv_str(mu), _inv_str(lam),
                         q_level(args.p, n)])
    report = {"columns": ["curve", "constant", "n", "mu", "lambda", "q_n"],
              "rows": rows, "curves_found": len(hits)}
    return report, EXIT_OK if hits else EXIT_VERDICT


def cmd_oracle_check(args):
    E = parse_curve(args.curve)
    psi = parse_psi(args.psi)
    rep = check_interpolation(E, args.p, args.n, M=args.M, psi=psi, i=args.i,
                              B_q=args.qexp_bound, tol=args.tol)
    gauss = []
    if args.gauss_checks:
        import random
        rng = random.Random(args.seed)
        primes = [m for m in range(3, 60) if _is_prime(m)]
        while len(gauss) < args.gauss_checks:
            m = rng.choice(primes)
            full = DirichletChar(m, [1])
            chi = full ** rng.randrange(1, full.order)
            if chi.conductor != m:
                continue
            exact, _ = gauss_sum(chi)  # asserts |tau|^2 = m exactly
            gauss.append([m, list(chi.signature()[2])])
    report = {"label": rep.label,
              "exact": [rep.exact.real, rep.exact.imag],
              "oracle": [rep.oracle.real, rep.oracle.imag],
              "rel_error": rep.rel, "err_bound": rep.err, "ok": rep.ok,
              "gauss_checks": gauss}
    return report, EXIT_OK if rep.ok else EXIT_VERDICT


COMMANDS = {"space": cmd_space, "theta": cmd_theta,
            "invariants": cmd_invariants, "kida": cmd_kida,
            "tower": cmd_tower, "signed": cmd_signed,
            "oracle-check": cmd_oracle_check}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mazurtate",
        description="Exact Mazur-Tate elements, finite-level Iwasawa "
                    "invariants, and ramified-transition reports.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=20,
                        help="p-adic working precision B (default 20)")
    common.add_argument("--qexp-bound", type=int, default=10000,
                        help="q-expansion truncation for the oracle")
    common.add_argument("--tol", type=float, default=1e-6,
                        help="numeric tolerance for oracle comparisons")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized spot checks")
    common.add_argument("--format", choices=("json", "tsv", "text"),
                        default="json")
    common.add_argument("--sturm-override", type=int, default=None,
                        help="override the Hecke-isolation bound")
    common.add_argument("--p1p2-convention", choices=("compat", "literal"),
                        default="compat",
                        help="ramified-prime membership reading")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", parents=[common],
                        help="modular-symbol space and eigensymbol summary")
    sp.add_argument("--curve", required=True)

    sp = sub.add_parser("theta", parents=[common],
                        help="one Mazur-Tate element with invariants")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--psi", default="triv")

    sp = sub.add_parser("invariants", parents=[common],
                        help="mu/lambda table over a level range")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n-range", default="1:2")
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--psi", default="triv")

    sp = sub.add_parser("kida", parents=[common],
                        help="two-sided ramified-transition verdict for L/K")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--K", default="Q")
    sp.add_argument("--L", required=True)
    sp.add_argument("--n", type=int, default=1)

    sp = sub.add_parser("tower", parents=[common],
                        help="pairwise verdict consistency for M in K in L")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--base-field", default="Q")
    sp.add_argument("--K", required=True)
    sp.add_argument("--L", required=True)
    sp.add_argument("--n", type=int, default=1)

    sp = sub.add_parser("signed", parents=[common],
                        help="scan the curve table for a_p = 0 signed growth")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n-range", default="1:3")

    sp = sub.add_parser("oracle-check", parents=[common],
                        help="interpolation cross-check against L-values")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--psi", default="triv")
    sp.add_argument("--i", type=int, default=None)
    sp.add_argument("--gauss-checks", type=int, default=0)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    config = normalized_config(args)
    stream = sys.stdout
    try:
        report, code = COMMANDS[args.command](args)
    except _CONFIG_ERRORS as exc:
        emit({"config": config, "error": type(exc).__name__,
              "message": str(exc), "exit": EXIT_CONFIG}, args.format, stream)
        return EXIT_CONFIG
    except _PRECISION_ERRORS as exc:
        emit({"config": config, "error": type(exc).__name__,
              "message": str(exc), "exit": EXIT_PRECISION}, args.format, stream)
        return EXIT_PRECISION
    except MazurTateError as exc:
        emit({"config": config, "error": type(exc).__name__,
              "message": str(exc), "exit": EXIT_VERDICT}, args.format, stream)
        return EXIT_VERDICT
    emit({"config": config, "report": report}, args.format, stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
