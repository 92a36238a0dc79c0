"""``ddtkit`` command line.

Exit codes: 0 success, 1 validation error (including bad flags and failed
identity checks), 2 I/O error.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from .channel import NoiseSpec, PulseTrainSpec, apply_channel, ddt_pulse_train_sum, load_channel, pulse_train
from .diagnostics import identity_suite
from .figures import FigureConfig, run_figures
from .mapio import CSV_CORNER, export_map_csv, export_map_pgm, read_map_csv
from .signals import (
    S1,
    S2,
    S3,
    ComplexSignal,
    FromFile,
    Gaussian,
    GaussianPulse,
    Rectangular,
    SignalFormatError,
    TabulatedWindow,
    Tone,
    UnitImpulse,
    make_grid,
    read_signal_csv,
    synthesize,
    write_signal_csv,
)
from .transforms import DeconvOptions, ddt_map, inverse_ddt, stft_map

DEFAULT_GRID = "-10,0.0390625,512"
DEFAULT_AXIS = "-5,0.0390625,256"
NAMED_SIGNALS = {"s1": S1, "s2": S2, "s3": S3}
_NEGATIVE = re.compile(r"^-[\d.]")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------- flag parsing


def parse_grid(text: str):
    try:
        start, step, count = text.split(",")
        count_f = float(count)
        if count_f != int(count_f):
            raise ValueError
        return make_grid(float(start), float(step), int(count_f))
    except ValueError as exc:
        raise ValueError(f"bad grid {text!r}: expected start,step,count ({exc})") from None


def _kv(text: str) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        key, _, val = item.partition("=")
        out[key.strip()] = val.strip()
    return out


def parse_window(text: str):
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    if kind in ("gaussian", "gauss"):
        return Gaussian(float(_kv(rest).get("a", 1.0)))
    if kind in ("rect", "rectangular"):
        return Rectangular(float(_kv(rest)["h"]))
    if kind == "file":
        sig = read_signal_csv(rest)
        return TabulatedWindow(sig.grid, sig.samples)
    raise ValueError(f"unknown window {text!r}")


def parse_signal(text: str, grid) -> ComplexSignal:
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    if kind in NAMED_SIGNALS:
        expr = NAMED_SIGNALS[kind]
    elif kind == "tone":
        expr = Tone(float(_kv(rest)["w"]))
    elif kind == "impulse":
        expr = UnitImpulse(float(_kv(rest).get("at", 0.0)))
    elif kind in ("gauss", "gaussian"):
        expr = GaussianPulse(float(_kv(rest).get("a", 1.0)))
    elif kind == "file":
        expr = FromFile(rest)
    else:
        raise ValueError(f"unknown signal {text!r}")
    return synthesize(expr, grid)


def parse_noise(text: str) -> NoiseSpec:
    sigma, _, seed = text.partition(",")
    return NoiseSpec(float(sigma), int(seed or 0))


def parse_symbols(text: str) -> np.ndarray:
    return np.array([complex(tok.replace(" ", "")) for tok in text.split(",")])


def parse_formats(text: str) -> tuple:
    formats = tuple(f.strip().lower() for f in text.split(",") if f.strip())
    bad = set(formats) - {"csv", "pgm"}
    if bad or not formats:
        raise ValueError(f"unknown format(s) in {text!r}")
    return formats


# --------------------------------------------------------------------------- commands


def _write_map(tf, out: Path, stem: str, formats):
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        export_map_csv(tf, out / f"{stem}.csv")
        written.append(out / f"{stem}.csv")
    if "pgm" in formats:
        export_map_pgm(tf, out / f"{stem}.pgm")
        written.append(out / f"{stem}.pgm")
    for p in written:
        print(p)


def _map_command(args, transform, stem):
    grid = parse_grid(args.grid)
    s = parse_signal(args.signal, grid)
    tf = transform(s, parse_window(args.window), parse_grid(args.omegaaxis), parse_grid(args.taxis))
    _write_map(tf, Path(args.out), args.name or stem, parse_formats(args.format))
    return 0


def cmd_ddt(args):
    return _map_command(args, ddt_map, "ddt")


def cmd_stft(args):
    return _map_command(args, stft_map, "stft")


def cmd_channel(args):
    grid = parse_grid(args.grid)
    s = parse_signal(args.signal, grid)
    out_grid = parse_grid(args.taxis) if args.taxis else s.grid
    y = apply_channel(s, load_channel(args.channel), parse_noise(args.noise), out_grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(y, out / "received.csv")
    print(out / "received.csv")
    return 0


def _load_slice(path: Path) -> ComplexSignal:
    head = path.read_text(encoding="ascii").split("\n", 1)[0]
    if head.startswith(CSV_CORNER):
        return read_map_csv(path).column(0.0)
    return read_signal_csv(path)


def cmd_invert(args):
    d0 = _load_slice(Path(args.input))
    est = inverse_ddt(d0, parse_window(args.window), DeconvOptions(args.lam, args.pad))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(est, out / "recovered.csv")
    print(out / "recovered.csv")
    return 0


def cmd_pulsetrain(args):
    pulse_grid = parse_grid(args.pulse_grid)
    pulse = parse_signal(args.pulse, pulse_grid)
    spec = PulseTrainSpec(parse_symbols(args.symbols), pulse, args.T)
    grid = parse_grid(args.grid) if args.grid else spec.covering_grid()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(pulse_train(spec, grid), out / "train.csv")
    print(out / "train.csv")
    if args.omega is not None:
        d = ddt_pulse_train_sum(spec, parse_window(args.window), args.omega, grid)
        write_signal_csv(d, out / "train_ddt.csv")
        print(out / "train_ddt.csv")
    return 0


def cmd_figures(args):
    signals = {name: NAMED_SIGNALS[name] for name in args.signals.split(",") if name}
    if not signals or set(signals) - set(NAMED_SIGNALS):
        raise ValueError(f"--signals must list names from {sorted(NAMED_SIGNALS)}")
    cfg = FigureConfig(
        input_grid=parse_grid(args.grid),
        t_axis=parse_grid(args.taxis),
        omega_axis=parse_grid(args.omegaaxis),
        window=parse_window(args.window),
        signals=signals,
        output_dir=Path(args.out),
        formats=parse_formats(args.format),
    )
    manifest = run_figures(cfg)
    for name in manifest.files:
        print(cfg.output_dir / name)
    print(cfg.output_dir / "manifest.json")
    return 0


def cmd_verify(args):
    grid = parse_grid(args.grid)
    s = parse_signal(args.signal, grid)
    results = identity_suite(s, parse_window(args.window), args.omega, k0=args.shift)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ddtkit", description="Delay Doppler transform toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, signal="s1"):
        sp.add_argument("--grid", default=DEFAULT_GRID, help="input grid start,step,count")
        sp.add_argument("--signal", default=signal, help="s1|s2|s3|tone:w=..|impulse|gauss:a=..|file:PATH")
        sp.add_argument("--window", default="gaussian:a=1", help="gaussian:a=..|rect:h=..|file:PATH")
        sp.add_argument("--out", default=".", help="output directory")

    for name, fn, help_ in (("ddt", cmd_ddt, "DDT magnitude map"), ("stft", cmd_stft, "STFT map")):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--taxis", default=DEFAULT_AXIS)
        sp.add_argument("--omegaaxis", default=DEFAULT_AXIS)
        sp.add_argument("--format", default="csv,pgm")
        sp.add_argument("--name", default=None, help="output file stem")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("channel", help="simulate a delay-Doppler channel")
    common(sp)
    sp.add_argument("--channel", required=True, help="channel JSON file")
    sp.add_argument("--noise", default="0,0", help="sigma,seed")
    sp.add_argument("--taxis", default=None, help="output grid (default: signal grid)")
    sp.set_defaults(func=cmd_channel)

    sp = sub.add_parser("invert", help="inverse DDT from the zero-Doppler slice")
    sp.add_argument("--input", required=True, help="signal CSV (t,re,im) or DDT map CSV")
    sp.add_argument("--window", default="gaussian:a=1")
    sp.add_argument("--lambda", dest="lam", type=float, default=1e-10)
    sp.add_argument("--pad", type=int, default=2)
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("pulsetrain", help="build a pulse train and optionally its DDT")
    sp.add_argument("--symbols", required=True, help="comma-separated complex symbols, e.g. 1,1j,-1")
    sp.add_argument("--pulse", default="gauss:a=1")
    sp.add_argument("--pulse-grid", default="-2.5,0.0390625,129")
    sp.add_argument("--T", type=float, required=True, help="symbol duration")
    sp.add_argument("--grid", default=None, help="output grid (default: covers the train)")
    sp.add_argument("--omega", type=float, default=None, help="also write the DDT at this rate")
    sp.add_argument("--window", default="gaussian:a=1")
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_pulsetrain)

    sp = sub.add_parser("figures", help="regenerate the DDT/STFT figure maps")
    sp.add_argument("--out", default="figures")
    sp.add_argument("--format", default="csv,pgm")
    sp.add_argument("--signals", default="s1,s2,s3")
    sp.add_argument("--grid", default=DEFAULT_GRID)
    sp.add_argument("--taxis", default=DEFAULT_AXIS)
    sp.add_argument("--omegaaxis", default=DEFAULT_AXIS)
    sp.add_argument("--window", default="gaussian:a=1")
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("verify", help="run the shift, channel and pulse-train identity checks")
    sp.add_argument("--grid", default=DEFAULT_GRID)
    sp.add_argument("--signal", default="s1")
    sp.add_argument("--window", default="gaussian:a=1")
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--shift", type=int, default=32, help="shift in samples")
    sp.set_defaults(func=cmd_verify)
    return p


def _glue_negative_values(argv):
    """Turn ``--grid -10,0.1,5`` into ``--grid=-10,0.1,5`` so argparse accepts it."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    except SignalFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
