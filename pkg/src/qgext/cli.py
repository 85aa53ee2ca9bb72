"""Command-line front end.

Every subcommand prints one JSON report on standard output and short prose
plus wall-clock timing on standard error.  Exit status: 0 when every check
passes, 1 when a mathematical check fails, 2 for bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from pathlib import Path

from . import __version__, kernels

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str) -> tuple[dict, str]:
    p = Path(path)
    try:
        raw = p.read_bytes()
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_pair(path: str, digests: dict):
    from .matched_pair import pair_from_json

    doc, digest = _read_json(path)
    digests[path] = digest
    return pair_from_json(doc, base_dir=Path(path).parent)


def _load_cocycle(pair, source: str | None, digests: dict):
    from .cohomology import CocyclePair

    if source is None or source == "trivial":
        return CocyclePair.trivial(pair)
    doc, digest = _read_json(source)
    digests[source] = digest
    c = CocyclePair.from_json(doc)
    if c.U.shape != (pair.n1, pair.n1, pair.n2) or c.V.shape != (pair.n1, pair.n2, pair.n2):
        raise InputError("cocycle tables do not match the matched pair")
    return c


# ---------------------------------------------------------------------------
# subcommands; each returns (result payload, ok)


def cmd_factorize(args, digests):
    from .group_core import build_group
    from .matched_pair import exact_factorization, verify_matched_identities

    doc, digests[args.group] = _read_json(args.group)
    G = build_group(doc)
    pair = exact_factorization(G, args.h1, args.h2)
    rep = verify_matched_identities(pair)
    return {"pair": pair.to_json(), "identities": rep}, rep["ok"]


def cmd_extgroup(args, digests):
    from .cohomology import extension_group

    pair = _load_pair(args.pair, digests)
    return extension_group(pair).to_json(), True


def cmd_cocycles(args, digests):
    from .cohomology import cocycle_representatives, extension_group, is_cocycle

    pair = _load_pair(args.pair, digests)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reps = cocycle_representatives(pair, args.order)
    ok = all(is_cocycle(pair, c)["ok"] for c in reps)
    return {
        "extension_group": extension_group(pair).to_json(),
        "order": args.order,
        "count": len(reps),
        "warnings": [str(w.message) for w in caught],
        "representatives": [c.to_json() for c in reps],
    }, ok


def _verify_one(pair, c):
    from .bicrossed import build_quantum_group, haar_oracle_check, verify_all
    from .cohomology import is_cocycle

    coc = is_cocycle(pair, c)
    if not coc["ok"]:
        return {"cocycle": coc, "ok": False}
    qg = build_quantum_group(pair, c)
    rep = verify_all(qg)
    rep["haar_oracle"] = haar_oracle_check(qg)
    rep["ok"] = rep["ok"] and rep["haar_oracle"]["ok"]
    rep["cocycle"] = coc
    return rep


def cmd_verify(args, digests):
    from .cohomology import cocycle_representatives, extension_group

    pair = _load_pair(args.pair, digests)
    if args.all_classes:
        d = extension_group(pair).exponent
        cocycles = cocycle_representatives(pair, d)
    else:
        cocycles = [_load_cocycle(pair, args.cocycle, digests)]
    reports = [_verify_one(pair, c) for c in cocycles]
    return {"dimension": pair.n, "backend": kernels.backend(), "cocycles": reports}, \
        all(r["ok"] for r in reports)


def cmd_theta(args, digests):
    import numpy as np

    from .bicrossed import build_theta, cocycles_from_theta
    from .cohomology import is_cocycle, is_normalized, normalize_cocycle

    pair = _load_pair(args.pair, digests)
    c = _load_cocycle(pair, args.cocycle, digests)
    coc = is_cocycle(pair, c)
    if coc["ok"] and not is_normalized(c):
        c = normalize_cocycle(pair, c)
    theta, rep = build_theta(pair, c, check=False)
    table = np.asarray(theta.phase).reshape(pair.n1, pair.n2, pair.n1, pair.n2)
    rep["inverse_recovers_cocycle"] = bool(cocycles_from_theta(pair, table, theta.den).equals(c))
    rep["cocycle"] = coc
    rep["theta"] = theta.to_json()
    return rep, bool(rep["ok"] and rep["inverse_recovers_cocycle"] and coc["ok"])


def cmd_example(args, digests):
    from . import continuous_verify as cv

    if args.which == "axb":
        rep = cv.axb_example_check(args.samples, args.seed, tol=args.tol)
    elif args.which == "sl2":
        rep = cv.sl2_example_check(args.samples, args.seed, tol=args.tol)
    elif args.which == "cocycle":
        rep = cv.cocycle_example_check(args.n, args.samples, args.seed, tol=max(args.tol, 1e-6))
    elif args.which == "star1":
        rep = cv.star1_check(args.samples, args.seed, tol=args.tol)
    else:
        rep = cv.infinitesimal_check()
    return rep, rep["ok"]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgext", description="Finite cocycle bicrossed products and their checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--fixtures", metavar="DIR", help="write the bundled matched-pair files to DIR and exit")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("factorize", help="exact factorization of a group into two subgroups")
    s.add_argument("group")
    s.add_argument("--h1", type=int, nargs="+", required=True)
    s.add_argument("--h2", type=int, nargs="+", required=True)
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("extgroup", help="the group of extensions of a matched pair")
    s.add_argument("pair")
    s.set_defaults(func=cmd_extgroup)

    s = sub.add_parser("cocycles", help="normalized representatives of the classes of a given order")
    s.add_argument("pair")
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_cocycles)

    s = sub.add_parser("verify", help="build the quantum group and run the exact axiom suite")
    s.add_argument("pair")
    s.add_argument("--cocycle", default="trivial", help="cocycle JSON file or 'trivial'")
    s.add_argument("--all-classes", action="store_true", help="verify one representative per class")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("theta", help="the diagonal phase operator of a cocycle")
    s.add_argument("pair")
    s.add_argument("--cocycle", required=True)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("example", help="numerical checks of the continuous examples")
    s.add_argument("which", choices=["axb", "sl2", "cocycle", "star1", "infinitesimal"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_example)
    return p


_DEFAULT_SAMPLES = {"axb": 10000, "sl2": 10000, "cocycle": 200, "star1": 1000, "infinitesimal": 0}


def dispatch(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.fixtures:
        from .fixtures import write_fixtures

        files = write_fixtures(args.fixtures)
        stdout.write(json.dumps({"fixtures": files}, sort_keys=True) + "\n")
        return EXIT_OK
    if not getattr(args, "func", None):
        parser.print_usage(stderr)
        return EXIT_INPUT
    if args.command == "example" and args.samples is None:
        args.samples = _DEFAULT_SAMPLES[args.which]
    digests: dict[str, str] = {}
    t0 = time.perf_counter()
    try:
        result, ok = args.func(args, digests)
    except (InputError, ValueError, KeyError, TypeError, IndexError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    elapsed = time.perf_counter() - t0
    report = {
        "command": list(argv if argv is not None else sys.argv[1:]),
        "inputs": digests,
        "result": result,
        "ok": bool(ok),
    }
    stdout.write(json.dumps(report, sort_keys=True, default=_json_default) + "\n")
    stderr.write(f"{args.command}: {'all checks passed' if ok else 'CHECK FAILED'} "
                 f"({elapsed:.3f} s, backend {kernels.backend()})\n")
    return EXIT_OK if ok else EXIT_FAIL


def _json_default(x):
    import numpy as np

    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
