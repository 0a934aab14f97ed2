"""Command-line front end: ``optseq <command> ...``.

Exit codes: 0 success, 1 failed verification or inconclusive criteria,
2 bad input (including descriptor parse errors), 3 resource limit,
4 inconclusive criteria under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import acceptance
from .config import RunConfig, load_config, parse_pairs
from .criteria import (INCONCLUSIVE, classify_optimal_spaces,
                       equal_norm_lower_constant, equal_norm_upper_constant,
                       holder_pairing_check, lorentz_assump_constant,
                       lorentz_did_ratio, orlicz_estimate_constant,
                       orlicz_submultiplicative_constant,
                       orlicz_supermultiplicative_constant,
                       tensor_inequality_check)
from .errors import (InvalidArgumentError, OptseqError, ResourceLimitError,
                     UnsupportedOperationError)
from .fundidx import (dilation_functions, fundamental_function,
                      fundamental_function_direct, grobler_dodds, space_indices)
from .optimal import (lower_norm_estimate, phi_n_estimate,
                      upper_norm_estimate)
from .seqcore import rearrange, tensor, tensor_blocks
from .spaces import SpaceParseError, norm, parse_space

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INCONCLUSIVE = 4


def g17(x: float) -> str:
    """17 significant digits, locale independent."""
    x = float(x)
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def read_vector(inline: str | None, path: str | None) -> np.ndarray:
    if (inline is None) == (path is None):
        raise InvalidArgumentError("give exactly one of --vec and --file")
    if inline is not None:
        items = [s for s in inline.split(",") if s.strip()]
    else:
        with open(path, encoding="utf-8") as fh:
            items = [s for s in (line.strip() for line in fh) if s and not s.startswith("#")]
    try:
        return np.array([float(s) for s in items])
    except ValueError as exc:
        raise InvalidArgumentError(f"bad number in vector: {exc}") from exc


def int_list(text: str) -> list[int]:
    try:
        out = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"expected comma-separated integers: {text!r}") from exc
    if not out:
        raise InvalidArgumentError("empty integer list")
    return out


class Emitter:
    """Collects the report and writes it to stdout or ``--out``."""

    def __init__(self, args, cfg: RunConfig):
        self.out = getattr(args, "out", None)
        self.cfg = cfg

    def json(self, payload: dict) -> None:
        doc = {"config": self.cfg.as_dict(), **payload}
        self.write(json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n")

    def csv(self, header: list, rows: list) -> None:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(self.cfg.as_dict(), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        self.write(buf.getvalue())

    def text(self, line: str) -> None:
        self.write(line + "\n")

    def write(self, s: str) -> None:
        if self.out:
            with open(self.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(s)
        else:
            sys.stdout.write(s)


# commands ------------------------------------------------------------------


def cmd_describe(args, cfg, emit):
    space = parse_space(args.space)
    emit.text(space.describe())
    return EXIT_OK


def cmd_norm(args, cfg, emit):
    space = parse_space(args.space)
    emit.text(g17(norm(space, read_vector(args.vec, args.file))))
    return EXIT_OK


def cmd_rearrange(args, cfg, emit):
    emit.text(",".join(g17(x) for x in rearrange(read_vector(args.vec, args.file))))
    return EXIT_OK


def cmd_tensor(args, cfg, emit):
    a = read_vector(args.vec, None)
    b = read_vector(args.vec2, None)
    out = tensor_blocks(a, b) if args.blocks else tensor(a, b)
    emit.text(",".join(g17(x) for x in out))
    return EXIT_OK


def cmd_phi(args, cfg, emit):
    space = parse_space(args.space)
    ns = int_list(args.n)
    f = fundamental_function_direct if args.direct else fundamental_function
    rows = [[n, g17(f(space, n))] for n in ns]
    if cfg.format == "csv":
        emit.csv(["n", "phi"], rows)
    else:
        emit.json({"space": space.describe(),
                   "phi": [{"n": n, "value": float(v)} for n, v in rows]})
    return EXIT_OK


def cmd_dilation(args, cfg, emit):
    space = parse_space(args.space)
    rows = []
    for n in int_list(args.n):
        m0, minf = dilation_functions(space, n, cfg.m_cap)
        rows.append([n, g17(m0), g17(minf)])
    if cfg.format == "csv":
        emit.csv(["n", "M0", "Minf"], rows)
    else:
        emit.json({"space": space.describe(), "m_cap": cfg.m_cap,
                   "dilation": [{"n": n, "M0": float(a), "Minf": float(b)}
                                for n, a, b in rows]})
    return EXIT_OK


def cmd_indices(args, cfg, emit):
    header = ["family", "params", "mu", "nu", "delta", "sigma", "method", "residual"]
    rows = []
    for text in args.space:
        space = parse_space(text)
        mu, nu = space_indices(space, cfg.n_cap, cfg.m_cap, cfg.grid)
        gd = grobler_dodds(space, cfg.n_cap, cfg.m_cap, cfg.grid)
        params = ";".join(f"{k}={v}" for k, v in space.params().items())
        rows.append([space.family, params, g17(mu.value), g17(nu.value),
                     g17(gd.delta), g17(gd.sigma), mu.method,
                     g17(max(mu.residual, nu.residual))])
    if cfg.format == "json":
        emit.json({"indices": [dict(zip(header, r)) for r in rows]})
    else:
        emit.csv(header, rows)
    return EXIT_OK


def cmd_optimal(args, cfg, emit):
    space = parse_space(args.space)
    if args.n is not None:
        if args.vec is not None or args.file is not None:
            raise InvalidArgumentError("give either --n or a vector")
        a = np.ones(args.n)
    else:
        a = read_vector(args.vec, args.file)
    search = cfg.search()
    out = {"space": space.describe(), "a": rearrange(a).tolist()}
    phi = None
    if args.kind in ("upper", "all"):
        out["upper"] = upper_norm_estimate(space, a, search).to_json()
    if args.kind in ("phi", "lower", "all"):
        phi = phi_n_estimate(space, a, search)
        if args.kind != "lower":
            out["phi"] = phi.to_json()
    if args.kind in ("lower", "all"):
        out["lower"] = lower_norm_estimate(space, a, search, phi=phi).to_json()
    emit.json(out)
    return EXIT_OK


def _criteria_for(space, cfg: RunConfig):
    rule = cfg.rule()
    search = cfg.search()
    ccfg = cfg.classify()
    f = space.family
    reps = []
    if f in ("lp", "lpq"):
        gd = grobler_dodds(space)
        if 1.0 < gd.delta < np.inf:
            reps.append(equal_norm_upper_constant(space, gd.delta, search=search, rule=rule))
        if 1.0 < gd.sigma < np.inf:
            reps.append(equal_norm_lower_constant(space, gd.sigma, search=search, rule=rule))
        reps.append(holder_pairing_check(space, cfg.pairing_samples, cfg.seed))
        reps.append(tensor_inequality_check(space, cfg.tensor_samples, "upper",
                                            seed=cfg.seed, rule=rule))
    elif f == "lorentz":
        reps.append(lorentz_did_ratio(space.weight, ccfg.did_ns, rule))
        reps.append(lorentz_assump_constant(space.q, space.weight, None, cfg.assump_n,
                                            ccfg.assump_ls, rule, cfg.n_cap, cfg.m_cap))
        reps.append(tensor_inequality_check(space, cfg.tensor_samples, "lower",
                                            seed=cfg.seed, rule=rule))
    else:
        N = space.orlicz
        mu, nu = space_indices(space, cfg.n_cap, cfg.m_cap, cfg.grid)
        reps.append(orlicz_submultiplicative_constant(N, cfg.grid, rule=rule))
        reps.append(orlicz_supermultiplicative_constant(N, cfg.grid, rule=rule))
        reps.append(orlicz_estimate_constant(N, 1.0 / nu.value, "upper", cfg.grid, rule=rule))
        reps.append(orlicz_estimate_constant(N, 1.0 / mu.value, "lower", cfg.grid, rule=rule))
        for d in ("upper", "lower"):
            reps.append(tensor_inequality_check(space, cfg.tensor_samples, d,
                                                seed=cfg.seed, rule=rule))
    return reps


def _verdict_exit(verdicts, strict: bool) -> int:
    if any(v == INCONCLUSIVE for v in verdicts):
        return EXIT_INCONCLUSIVE if strict else EXIT_FAIL
    return EXIT_OK


def cmd_criteria(args, cfg, emit):
    space = parse_space(args.space)
    reps = _criteria_for(space, cfg)
    if args.only:
        keep = set(args.only.split(","))
        reps = [r for r in reps if r.id.split("[", 1)[0] in keep]
    emit.json({"space": space.describe(), "criteria": [r.to_json() for r in reps]})
    return _verdict_exit([r.verdict for r in reps], args.strict)


def cmd_classify(args, cfg, emit):
    space = parse_space(args.space)
    rep = classify_optimal_spaces(space, cfg.classify())
    emit.json({"classification": rep})
    verdicts = [c["verdict"] for c in rep["criteria"]]
    if rep["status"] == INCONCLUSIVE:
        verdicts.append(INCONCLUSIVE)
    return _verdict_exit(verdicts, args.strict)


def cmd_verify(args, cfg, emit):
    only = int_list(args.only) if args.only else None
    if only and not set(only) <= set(acceptance.CHECKS):
        raise InvalidArgumentError(f"checks are numbered {min(acceptance.CHECKS)}"
                                   f"..{max(acceptance.CHECKS)}")
    results = acceptance.run_acceptance(cfg, only)
    passed = all(r.passed for r in results)
    emit.json({"passed": passed, "results": [r.to_json() for r in results]})
    return EXIT_OK if passed else EXIT_FAIL


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines")
    common.add_argument("--caps", help="comma-separated key=value overrides")
    common.add_argument("--grid", type=int, help="Orlicz grid size")
    common.add_argument("--seed", type=int, help="64-bit seed")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--strict", action="store_true",
                        help="exit 4 when any verdict is inconclusive")

    p = argparse.ArgumentParser(
        prog="optseq",
        description="Norms, indices and optimal upper/lower spaces of "
                    "symmetric sequence spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, space=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if space:
            sp.add_argument("space", help="descriptor, e.g. lp:p=2")
        sp.set_defaults(func=func)
        return sp

    def vec(sp):
        sp.add_argument("--vec", help="comma-separated numbers")
        sp.add_argument("--file", help="file with one number per line")

    add("describe", cmd_describe, "print the canonical descriptor")
    vec(add("norm", cmd_norm, "norm of a vector"))
    vec(add("rearrange", cmd_rearrange, "decreasing rearrangement", space=False))
    t = add("tensor", cmd_tensor, "tensor product of two vectors", space=False)
    t.add_argument("--vec", required=True)
    t.add_argument("--vec2", required=True)
    t.add_argument("--blocks", action="store_true", help="shifted-block layout")
    ph = add("phi", cmd_phi, "fundamental function")
    ph.add_argument("--n", required=True, help="comma-separated n values")
    ph.add_argument("--direct", action="store_true", help="evaluate the norm of 1^n")
    dl = add("dilation", cmd_dilation, "dilation functions M0 and Minf")
    dl.add_argument("--n", required=True, help="comma-separated n values")
    ix = sub.add_parser("indices", parents=[common], help="fundamental and Grobler-Dodds indices")
    ix.add_argument("space", nargs="+")
    ix.set_defaults(func=cmd_indices, default_format="csv")
    op = add("optimal", cmd_optimal, "block-search estimates of the optimal norms")
    vec(op)
    op.add_argument("--n", type=int, help="use a = 1^n")
    op.add_argument("--kind", choices=("upper", "phi", "lower", "all"), default="all")
    cr = add("criteria", cmd_criteria, "criterion checks for one space")
    cr.add_argument("--only", help="comma-separated criterion names")
    add("classify", cmd_classify, "identify the optimal upper and lower spaces")
    vf = add("verify", cmd_verify, "run the acceptance suite", space=False)
    vf.add_argument("--only", help="comma-separated check numbers")
    return p


def _config_from_args(args) -> RunConfig:
    overrides = {}
    if args.caps:
        overrides.update(parse_pairs(args.caps))
    if args.grid is not None:
        overrides["grid"] = args.grid
    if args.seed is not None:
        overrides["seed"] = args.seed
    fmt = args.format or getattr(args, "default_format", None)
    if fmt:
        overrides["format"] = fmt
    return load_config(args.config, overrides)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        emit = Emitter(args, cfg)
        return args.func(args, cfg, emit)
    except SpaceParseError as exc:
        print(f"optseq: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"optseq: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgumentError, UnsupportedOperationError) as exc:
        print(f"optseq: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"optseq: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OptseqError as exc:  # pragma: no cover - internal failures
        print(f"optseq: internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
