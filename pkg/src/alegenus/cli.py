"""Command-line driver.

Settings come from flags, then ``ALEGENUS_*`` environment variables, then a
TOML file given by ``--config``, then built-in defaults.  Reports are JSON on
standard output or ``--out PATH``.  Exit status: 0 when every check passes
or is only flagged, 1 on any failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

import tomli

from . import genus, verify
from .report import UNHATTED_KEY, build_document, emit_report, encode_laurent_series
from .verify import DEFAULT_TOLERANCES, Status

COMMANDS = ("genus", "expand", "regularized", "k3-compare", "verify-all", "verify", "scan-poles", "modular-check")
EXACT_ONLY = {"k3-compare"}
NUMERIC_ONLY = {"scan-poles", "modular-check"}
ENV_PREFIX = "ALEGENUS_"


class UsageError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    command: str = "verify-all"
    check: str | None = None
    r: int = 2
    q_order: int = 12
    v_order: int = 12
    backend: str | None = None
    tau: complex = 0.1 + 1.1j
    z: complex = 0.23 + 0.07j
    t1: complex = 0.17 + 0.05j
    t2: complex = -0.09 + 0.11j
    seed: int = 0
    n_samples: int = 20
    eps: float = 1e-3
    lattice_range: int = 1
    k3_compare: bool = False
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: str | None = None

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = [v.real, v.imag] if isinstance(v, complex) else v
        return out


SETTING_TYPES = {
    "r": int, "q_order": int, "v_order": int, "backend": str, "seed": int, "n_samples": int,
    "tau": complex, "z": complex, "t1": complex, "t2": complex, "eps": float, "lattice_range": int,
    "output_path": str,
}
TOLERANCE_KEYS = tuple(DEFAULT_TOLERANCES)


def _parse_complex(name: str, raw) -> complex:
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return complex(float(raw[0]), float(raw[1]))
    if isinstance(raw, (int, float)):
        return complex(raw)
    try:
        return complex(str(raw).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"{name}: cannot parse complex value {raw!r}") from None


def _coerce(name: str, raw):
    kind = SETTING_TYPES[name]
    if kind is complex:
        return _parse_complex(name, raw)
    try:
        return kind(raw)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: expected {kind.__name__}, got {raw!r}") from None


def _file_settings(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from None
    except tomli.TOMLDecodeError as exc:
        raise UsageError(f"config: {path}: {exc}") from None
    out = {}
    for key, value in data.items():
        norm = key.replace("-", "_")
        if norm == "tolerances" and isinstance(value, dict):
            for tk, tv in value.items():
                tk = tk.replace("-", "_")
                if tk not in TOLERANCE_KEYS:
                    raise UsageError(f"config: unknown tolerance '{tk}'")
                out[f"tol_{tk}"] = tv
        elif norm in SETTING_TYPES or (norm.startswith("tol_") and norm[4:] in TOLERANCE_KEYS):
            out[norm] = value
        else:
            raise UsageError(f"config: unknown key '{key}'")
    return out


def _env_settings(environ) -> dict:
    out = {}
    for name in list(SETTING_TYPES) + [f"tol_{k}" for k in TOLERANCE_KEYS]:
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            out[name] = raw
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file of settings")
    common.add_argument("--out", dest="output_path", help="write the report here instead of stdout")
    common.add_argument("--r", type=int, help="A_{r-1} type: number of fixed points")
    common.add_argument("--q-order", type=int, help="q-expansion order (relative to the leading power)")
    common.add_argument("--v-order", type=int, help="highest v-order kept (even)")
    common.add_argument("--backend", choices=("exact", "numeric"))
    for name in ("tau", "z", "t1", "t2"):
        common.add_argument(f"--{name}", help="complex number, e.g. 0.1+1.1j")
    common.add_argument("--seed", type=int)
    common.add_argument("--n-samples", type=int)
    common.add_argument("--eps", type=float, help="residue probe distance")
    common.add_argument("--lattice-range", type=int)
    for key in TOLERANCE_KEYS:
        common.add_argument(f"--tol-{key.replace('_', '-')}", dest=f"tol_{key}", type=float)

    parser = argparse.ArgumentParser(prog="alegenus", description="Equivariant elliptic genera of A-type ALE spaces")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("genus", parents=[common], help="circle-restricted genus (exact) or full genus value (numeric)")
    sub.add_parser("expand", parents=[common], help="Laurent coefficients alpha_hat_2g")
    reg = sub.add_parser("regularized", parents=[common], help="regularized genus")
    reg.add_argument("--k3-compare", action="store_true", help="also report the ratio to the K3 genus")
    sub.add_parser("k3-compare", parents=[common], help="compare the regularized genus with the K3 genus")
    sub.add_parser("verify-all", parents=[common], help="run every check")
    ver = sub.add_parser("verify", parents=[common], help="run one named check")
    ver.add_argument("check", choices=sorted(verify.NAMED_CHECKS))
    sub.add_parser("scan-poles", parents=[common], help="residues at candidate poles in t1")
    sub.add_parser("modular-check", parents=[common], help="the eight transformation laws")
    return parser


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Merge flags over environment over config file over defaults, then validate."""
    environ = os.environ if environ is None else environ
    merged: dict = {}
    if args.config:
        merged.update(_file_settings(args.config))
    merged.update(_env_settings(environ))
    for name in list(SETTING_TYPES) + [f"tol_{k}" for k in TOLERANCE_KEYS]:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    cfg = RunConfig(command=args.command, check=getattr(args, "check", None),
                    k3_compare=getattr(args, "k3_compare", False))
    for name, raw in merged.items():
        if name.startswith("tol_"):
            try:
                cfg.tolerances[name[4:]] = float(raw)
            except (TypeError, ValueError):
                raise UsageError(f"{name}: expected a number, got {raw!r}") from None
        else:
            setattr(cfg, name, _coerce(name, raw))
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.r < 1:
        raise UsageError("r: must be a positive integer")
    if cfg.q_order < 1:
        raise UsageError("q_order: must be at least 1")
    if cfg.v_order < 0 or cfg.v_order % 2:
        raise UsageError("v_order: must be even and nonnegative")
    if cfg.backend not in (None, "exact", "numeric"):
        raise UsageError(f"backend: must be 'exact' or 'numeric', got {cfg.backend!r}")
    if cfg.command in NUMERIC_ONLY and cfg.backend == "exact":
        raise UsageError(f"backend: '{cfg.command}' is numeric-only")
    if cfg.command in EXACT_ONLY and cfg.backend == "numeric":
        raise UsageError(f"backend: '{cfg.command}' is exact-only")
    if cfg.tau.imag <= 0:
        raise UsageError("tau: imaginary part must be positive")
    if cfg.n_samples < 1:
        raise UsageError("n_samples: must be positive")
    if cfg.eps <= 0:
        raise UsageError("eps: must be positive")
    if cfg.command == "verify-all" and cfg.v_order < 4:
        raise UsageError("v_order: verify-all needs at least 4")
    for k, v in cfg.tolerances.items():
        if not v > 0:
            raise UsageError(f"tol_{k}: must be positive")
    if cfg.backend is None:
        cfg.backend = "numeric" if cfg.command in NUMERIC_ONLY else "exact"


# -- commands -----------------------------------------------------------------
def _cmd_genus(cfg: RunConfig):
    if cfg.backend == "exact":
        series = genus.genus_circle_exact(cfg.r, cfg.q_order)
        return {"circle_genus": series, "variables": {"y": "e^{2 pi i z}", "sigma": "e^{2 pi i t}"}}, []
    val = genus.equivariant_genus_numeric(cfg.r, cfg.tau, cfg.z, cfg.t1, cfg.t2)
    return {UNHATTED_KEY: {"genus": val}}, []


def _cmd_expand(cfg: RunConfig):
    expansion = genus.v_expand(cfg.r, cfg.q_order, cfg.v_order)
    alphas = {f"alpha_hat_{2 * g}": a.truncate_order(cfg.q_order) for g, a in sorted(expansion.alpha_hat.items())}
    if cfg.backend == "exact":
        return {"alpha_hat": alphas, "v_variable": "v_hat = 2 pi i t",
                "odd_coefficients": encode_laurent_series(expansion.series.odd_part())}, []
    values = {}
    for g, a in sorted(expansion.alpha_hat.items()):
        values[f"alpha_{2 * g}"] = genus.unhatted_factor(2 * g - 2) * genus.evaluate_y_series(a, cfg.tau, cfg.z)
    return {UNHATTED_KEY: values}, []


def _cmd_regularized(cfg: RunConfig):
    reports = []
    if cfg.backend == "exact":
        reg = genus.regularized_genus(cfg.r, cfg.q_order)
        results = {"regularized_genus": reg}
    else:
        results = {UNHATTED_KEY: {"regularized_genus": genus.regularized_numeric(cfg.r, cfg.tau, cfg.z)}}
    if cfg.k3_compare:
        rep = verify.check_regularized(cfg.r, cfg.q_order)
        results["ratio_to_k3"] = Fraction(cfg.r, 24) if rep.status is not Status.FAIL else None
        reports.append(rep)
    return results, reports


def _cmd_k3_compare(cfg: RunConfig):
    rep = verify.check_regularized(cfg.r, cfg.q_order)
    results = {"ratio_to_k3": Fraction(cfg.r, 24) if rep.status is not Status.FAIL else None,
               "k3_elliptic_genus": genus.k3_elliptic_genus(cfg.q_order)}
    return results, [rep]


def _cmd_verify_all(cfg: RunConfig):
    reports = verify.run_suite(cfg.r, cfg.seed, cfg.q_order, cfg.v_order, cfg.n_samples, cfg.tolerances)
    return {"summary": {s.value: sum(r.status is s for r in reports) for s in Status}}, reports


def _cmd_verify(cfg: RunConfig):
    reports = verify.NAMED_CHECKS[cfg.check]({
        "r": cfg.r, "q_order": cfg.q_order, "v_order": max(cfg.v_order, 4), "seed": cfg.seed,
        "n_samples": cfg.n_samples, "tolerances": cfg.tolerances})
    return {}, reports


def _cmd_scan_poles(cfg: RunConfig):
    if cfg.r < 2:
        raise UsageError("r: pole scan needs r >= 2")
    rep = verify.check_pole_structure(cfg.r, cfg.t2, cfg.tau, cfg.z, cfg.lattice_range, cfg.eps, cfg.tolerances)
    return {UNHATTED_KEY: {"candidates": rep.values.pop("candidates")}}, [rep]


def _cmd_modular_check(cfg: RunConfig):
    samples = verify.sample_points(cfg.n_samples, cfg.seed, cfg.r)
    return {}, verify.check_modular_laws(cfg.r, samples, tolerances=cfg.tolerances)


HANDLERS = {
    "genus": _cmd_genus,
    "expand": _cmd_expand,
    "regularized": _cmd_regularized,
    "k3-compare": _cmd_k3_compare,
    "verify-all": _cmd_verify_all,
    "verify": _cmd_verify,
    "scan-poles": _cmd_scan_poles,
    "modular-check": _cmd_modular_check,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute ``cfg``; returns the report document and the exit code."""
    results, reports = HANDLERS[cfg.command](cfg)
    doc = build_document(cfg.command, cfg.echo(), results, reports)
    code = 1 if any(r.status is Status.FAIL for r in reports) else 0
    return doc, code


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args, environ)
        doc, code = run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"alegenus: error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_report(doc, cfg.output_path)
    except OSError as exc:
        print(f"alegenus: error: {exc}", file=sys.stderr)
        return 1
    if doc["flags"]:
        print(f"alegenus: {len(doc['flags'])} check(s) flagged; see the 'flags' section", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
