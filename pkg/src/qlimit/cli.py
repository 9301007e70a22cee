"""``qlimit`` command line: sweep, single-shot, verify, show-config.

Exit status: 0 success, 1 verification failure, 2 configuration error,
3 output error.
"""
import argparse
import json
import os
import sys

from .config import PRESETS, ConfigError, load, preset
from .errors import BlindQuadratureError, ValidationError
from .single_shot import covariance, mc_estimate, sigma_xx
from .sweep import OutputError, emit, run_sweep, write_text
from .verify import verify

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _theta_arg(text):
    if text == "opt":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'opt', got {text!r}") from None


def _common(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="JSON run configuration")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in configuration")
    p.add_argument("--detuning-hz", type=float, help="override detector.detuning_hz")
    p.add_argument("--seed", type=int, help="override seed")


def build_parser():
    parser = argparse.ArgumentParser(prog="qlimit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("sweep", help="frequency sweep to CSV/JSON (stdout without --out)")
    _common(p)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--single-sided", action="store_true", help="single-sided amplitude spectra")
    p.add_argument("--svg", action="store_true", help="also write <out>.svg (needs --out)")
    p.add_argument("--readout", choices=("phase", "optimal", "fixed"))
    p.add_argument("--theta", type=float, help="readout angle for --readout fixed")

    p = sub.add_parser("single-shot", help="Monte Carlo of the single-shot toy model")
    _common(p)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--r", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--theta", type=_theta_arg, help="readout angle or 'opt'")
    p.add_argument("--x-true", type=float)
    p.add_argument("--n-samples", type=int)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", help="run the identity and bound checks")
    _common(p)
    p = sub.add_parser("show-config", help="print the resolved configuration")
    _common(p)
    return parser


def resolve_config(args):
    cfg = load(args.config) if args.config else preset(args.preset or "fig3-tuned")
    updates = {}
    if args.detuning_hz is not None:
        updates["detector"] = {"detuning_hz": args.detuning_hz}
    out = {}
    if getattr(args, "out", None):
        out["path"] = args.out
    if getattr(args, "format", None):
        out["format"] = args.format
    if getattr(args, "single_sided", False):
        out["sided"] = "single"
    if getattr(args, "svg", False):
        out["svg"] = True
    if out:
        updates["output"] = out
    if args.verb == "sweep" and (args.readout or args.theta is not None):
        ro = {}
        if args.readout:
            ro["mode"] = args.readout
        if args.theta is not None:
            ro["theta"] = args.theta
        updates["readout"] = ro
    if args.verb == "single-shot":
        names = {"r": "r", "phi": "phi", "theta": "theta", "x_true": "x_true",
                 "n_samples": "n_samples", "workers": "workers"}
        ss = {key: getattr(args, attr) for attr, key in names.items() if getattr(args, attr) is not None}
        if ss:
            updates["single_shot"] = ss
    if updates:
        cfg = cfg.replace(**updates)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    return cfg


def _single_shot(cfg):
    ss = cfg.single_shot
    state = covariance(ss.r, ss.phi)
    res = mc_estimate(state, ss.theta, ss.x_true, ss.n_samples, cfg.seed, workers=ss.workers)
    expected = float(sigma_xx(state, res.theta_used))
    payload = {
        "r": ss.r,
        "phi": ss.phi,
        "theta_used": res.theta_used,
        "x_true": res.x_true,
        "n_samples": res.n_samples,
        "seed": cfg.seed,
        "mse": res.mse,
        "stderr_mse": res.stderr_mse,
        "qcrb": res.qcrb,
        "sigma_xx_analytic": expected,
        "excess_over_qcrb": expected - res.qcrb,
        "z_score": (res.mse - expected) / res.stderr_mse,
    }
    return json.dumps(payload, indent=1) + "\n"


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.verb == "show-config":
            sys.stdout.write(cfg.to_json())
            return EXIT_OK
        if args.verb == "verify":
            report = verify(cfg)
            sys.stdout.write(report.text())
            return EXIT_OK if report.passed else EXIT_VERIFY
        if args.verb == "sweep":
            if cfg.output.svg and not cfg.output.path:
                raise ConfigError("--svg needs an output path (--out or output.path)")
            written = emit(run_sweep(cfg), cfg)
            if cfg.output.path is None:
                sys.stdout.write(written[0])
            else:
                for path in written:
                    print(f"wrote {path}", file=sys.stderr)
            return EXIT_OK
        text = _single_shot(cfg)
        if cfg.output.path:
            write_text(cfg.output.path, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except (ConfigError, ValidationError, BlindQuadratureError) as exc:
        print(f"qlimit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as exc:
        print(f"qlimit: {exc}", file=sys.stderr)
        return EXIT_IO
    except BrokenPipeError:
        # reader went away (``qlimit sweep | head``); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
