"""Command-line entry point: ``contrastive-moments <subcommand> [flags]``.

Settings come from built-in defaults, then an optional ``--config`` file
(``key = value`` per line, ``#`` comments), then explicit flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from .experiment import (
    SweepConfig,
    compare_mean_cov,
    run_cell,
    sweep_dimension,
    sweep_epsilon,
    sweep_grid,
    verify_lemmas,
    write_records,
)
from .margin import recover
from .sampler import generate, load_binary, load_csv, make_instance, save_binary, save_csv

# flag name -> SweepConfig field
FLAG_FIELDS = {
    "family": "family",
    "a": "a",
    "b": "b",
    "dim": "d",
    "samples": "N",
    "trials": "trials",
    "seed": "seed",
    "alpha1": "alpha1",
    "alpha2": "alpha2",
    "alpha3": "alpha3",
    "affine": "affine_mode",
    "kappa_max": "kappa_max",
    "min_side_fraction": "min_side_fraction",
    "epsilon": "epsilon",
    "out": "out",
    "dims": "dims",
    "masses": "masses",
    "centers": "centers",
    "bands": "bands",
    "grid_lo": "grid_lo",
    "grid_hi": "grid_hi",
    "grid_step": "grid_step",
    "a_fixed": "a_fixed",
    "b_values": "b_values",
    "workers": "workers",
    "timing": "timing",
    "shift_scale": "shift_scale",
}
_FIELD_NAMES = {f.name for f in fields(SweepConfig)}


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _bands(text: str) -> tuple:
    """``"-0.5:0.5,-2:0.5"`` -> ``((-0.5, 0.5), (-2.0, 0.5))``."""
    out = []
    for item in text.split(","):
        if item.strip():
            a, b = item.split(":")
            out.append((float(a), float(b)))
    return tuple(out)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


CONVERTERS = {
    "family": str, "a": float, "b": float, "d": int, "N": int, "trials": int, "seed": int,
    "alpha1": float, "alpha2": float, "alpha3": float, "affine_mode": str, "kappa_max": float,
    "min_side_fraction": float, "epsilon": float, "out": str, "dims": _ints, "masses": _floats,
    "centers": _floats,
    "bands": _bands, "grid_lo": float, "grid_hi": float, "grid_step": float, "a_fixed": float,
    "b_values": _floats, "workers": int, "timing": _bool, "shift_scale": float,
}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file into SweepConfig keyword arguments."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        name = FLAG_FIELDS.get(key, key)
        if name not in _FIELD_NAMES:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[name] = CONVERTERS[name](val)
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value settings file; flags override it")
    p.add_argument("--family", choices=["gaussian", "uniform", "laplace"])
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--dim", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha1", type=float)
    p.add_argument("--alpha2", type=float)
    p.add_argument("--alpha3", type=float)
    p.add_argument("--affine", choices=["identity", "rotation", "random"])
    p.add_argument("--kappa-max", type=float)
    p.add_argument("--min-side-fraction", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--shift-scale", type=float)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", type=_bool, help="record wall-clock ms per trial (breaks byte-identical reruns)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contrastive-moments", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a dataset and write it to --out")
    _add_common(p)
    p.add_argument("--format", choices=["csv", "bin"], default="csv")

    p = sub.add_parser("recover", help="recover the band normal from a dataset or a fresh sample")
    _add_common(p)
    p.add_argument("--input", help="dataset file (.csv or CMDS binary); omit to sample one")

    p = sub.add_parser("sweep-grid", help="median sin(theta) over a grid of bands")
    _add_common(p)
    p.add_argument("--grid-lo", type=float)
    p.add_argument("--grid-hi", type=float)
    p.add_argument("--grid-step", type=float)

    p = sub.add_parser("sweep-dim", help="median sin(theta) versus dimension")
    _add_common(p)
    p.add_argument("--dims", type=_ints)
    p.add_argument("--bands", type=_bands, help='a:b pairs, e.g. --bands=-0.5:0.5,-2:0.5 (use "=" when the first value is negative)')

    p = sub.add_parser("sweep-eps", help="median sin(theta) versus band mass")
    _add_common(p)
    p.add_argument("--masses", type=_floats)
    p.add_argument("--centers", type=_floats, help="band centres pooled per mass")

    p = sub.add_parser("compare", help="best contrastive mean vs. contrastive covariance along b")
    _add_common(p)
    p.add_argument("--a-fixed", type=float)
    p.add_argument("--b-values", type=_floats)

    p = sub.add_parser("verify-lemmas", help="run the quadrature checks; exit 0 iff all pass")
    p.add_argument("--out")
    return parser


def config_from_args(args) -> SweepConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for flag, name in FLAG_FIELDS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return SweepConfig(**values)


def _out_dir(cfg: SweepConfig) -> Path:
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    cfg = config_from_args(args)
    inst = make_instance(
        cfg.model, cfg.a, cfg.b, cfg.d, cfg.epsilon, cfg.affine_mode,
        np.random.default_rng(np.random.SeedSequence([cfg.seed, 1])),
        kappa_max=cfg.kappa_max, shift_scale=cfg.shift_scale,
    )
    data = generate(inst, cfg.N, cfg.seed)
    out = _out_dir(cfg)
    path = out / ("dataset.csv" if args.format == "csv" else "dataset.cmds")
    (save_csv if args.format == "csv" else save_binary)(data.X, path)
    meta = {
        "family": cfg.family, "a": cfg.a, "b": cfg.b, "d": cfg.d, "N": cfg.N, "seed": cfg.seed,
        "affine_mode": cfg.affine_mode, "epsilon": cfg.epsilon,
        "normal_input_coords": inst.normal_in_input_coords().tolist(),
    }
    (out / "dataset.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(path)
    return 0


def cmd_recover(args) -> int:
    cfg = config_from_args(args)
    out = _out_dir(cfg)
    if args.input:
        path = Path(args.input)
        X = load_csv(path) if path.suffix == ".csv" else load_binary(path)
        res = recover(X, cfg.alphas, cfg.min_side_fraction)
        payload = {
            "selected_kind": res.selected_kind,
            "normal_whitened": res.chosen.tolist(),
            "normal_input_coords": res.chosen_in_input_coords().tolist(),
            "margin_widths": [None if r is None else r.width for r in res.reports],
        }
        (out / "recovery.json").write_text(json.dumps(payload, indent=2) + "\n")
        print(json.dumps(payload))
        return 0
    record = run_cell(cfg, cfg.a, cfg.b, cfg.d, cfg.seed)
    write_records([record], out / "recover.csv")
    print(f"{record.status}: selected={record.selected_kind} sin_theta={record.sin_theta_selected:.6g}")
    return 0 if record.ok else 1


def _sweep(fn):
    def run(args) -> int:
        cfg = config_from_args(args)
        if cfg.out is None:
            cfg = replace(cfg, out=".")
        result = fn(cfg)
        for f in result.files:
            print(f)
        return 0

    return run


def cmd_verify(args) -> int:
    reports = verify_lemmas()
    payload = [json.loads(r.to_json()) for r in reports]
    text = json.dumps(payload, indent=1) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "lemmas.json").write_text(text)
    for r in reports:
        print(f"{'PASS' if r.verdict else 'FAIL'}  {r.lemma_id}  worst={r.worst_violation:.3g}")
    return 0 if all(r.verdict for r in reports) else 1


COMMANDS = {
    "generate": cmd_generate,
    "recover": cmd_recover,
    "sweep-grid": _sweep(sweep_grid),
    "sweep-dim": _sweep(sweep_dimension),
    "sweep-eps": _sweep(sweep_epsilon),
    "compare": _sweep(compare_mean_cov),
    "verify-lemmas": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
