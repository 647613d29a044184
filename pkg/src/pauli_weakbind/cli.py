"""Command-line entry point: describe, predict, solve, sweep, verify, hardy.

Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field

from .asymptotics import DomainError, predict_pauli
from .channels import POWER, Channel, virtual_channels, zero_mode
from .fields import FieldSetup, ProfileError, RadialProfile, setup
from .halfline import NoRootError, StiffnessError, TruncationError
from .hardy import DecayCheckError, GrowthClassError, certify_setup
from .harness import METHODS, SweepReport, solve_row, sweep
from .specfun import BesselOverflowError, c_mu

log = logging.getLogger("pauli_weakbind")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3
CSV_HEADER = ["channel_m", "spin", "alpha", "lambda_numeric", "lambda_predicted", "ratio",
              "method", "residual"]
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- configuration


@dataclass(frozen=True)
class ProfileSpec:
    breakpoints: tuple
    coefficients: tuple

    @classmethod
    def from_dict(cls, d, name):
        if not isinstance(d, dict):
            raise ConfigError(f"{name}: expected an object with breakpoints and coefficients")
        unknown = set(d) - {"breakpoints", "coefficients"}
        if unknown:
            raise ConfigError(f"{name}: unknown keys {sorted(unknown)}")
        try:
            bp = tuple(float(x) for x in d["breakpoints"])
            co = tuple(tuple(float(c) for c in piece) for piece in d["coefficients"])
        except KeyError as exc:
            raise ConfigError(f"{name}: missing key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: {exc}") from None
        return cls(bp, co)

    def to_dict(self):
        return {"breakpoints": list(self.breakpoints),
                "coefficients": [list(c) for c in self.coefficients]}

    def profile(self, kind, name):
        try:
            return RadialProfile(self.breakpoints, self.coefficients, kind)
        except ProfileError as exc:
            raise ConfigError(f"{name}: {exc}") from None


@dataclass(frozen=True)
class SolverOptions:
    method: str = "shoot"
    m_max: int = 16
    fem_tol: float = 1e-8
    fem_sigma: float = 1.02
    fem_levels: int = 4

    def fem_options(self):
        return {"tol": self.fem_tol, "sigma": self.fem_sigma, "levels": self.fem_levels}


@dataclass(frozen=True)
class SweepOptions:
    alphas: tuple | None = None  # None: default grid per regime
    channels: tuple | None = None  # "m,spin" strings; None: virtual channels
    count_alphas: tuple = ()


@dataclass(frozen=True)
class OutputOptions:
    csv: str | None = None
    json: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    magnetic_field: ProfileSpec
    potential: ProfileSpec
    solver: SolverOptions = field(default_factory=SolverOptions)
    sweep: SweepOptions = field(default_factory=SweepOptions)
    output: OutputOptions = field(default_factory=OutputOptions)

    @classmethod
    def from_dict(cls, d) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {"magnetic_field", "potential", "solver", "sweep", "output"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
        for key in ("magnetic_field", "potential"):
            if key not in d:
                raise ConfigError(f"missing top-level key {key!r}")
        cfg = cls(ProfileSpec.from_dict(d["magnetic_field"], "magnetic_field"),
                  ProfileSpec.from_dict(d["potential"], "potential"),
                  _section(SolverOptions, d.get("solver"), "solver"),
                  _section(SweepOptions, d.get("sweep"), "sweep"),
                  _section(OutputOptions, d.get("output"), "output"))
        cfg.validate()
        return cfg

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None

    def to_dict(self):
        sw = self.sweep
        return {
            "magnetic_field": self.magnetic_field.to_dict(),
            "potential": self.potential.to_dict(),
            "solver": asdict(self.solver),
            "sweep": {"alphas": None if sw.alphas is None else list(sw.alphas),
                      "channels": None if sw.channels is None else list(sw.channels),
                      "count_alphas": list(sw.count_alphas)},
            "output": asdict(self.output),
        }

    def dumps(self) -> str:
        """Canonical form: every key present, sorted, two-space indent."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def validate(self):
        s = self.solver
        if s.method not in METHODS:
            raise ConfigError(f"solver.method must be one of {METHODS}, got {s.method!r}")
        for name in ("fem_tol",):
            if not getattr(s, name) > 0.0:
                raise ConfigError(f"solver.{name} must be positive")
        if not s.fem_sigma > 1.0:
            raise ConfigError("solver.fem_sigma must exceed 1")
        if s.fem_levels < 2:
            raise ConfigError("solver.fem_levels must be at least 2")
        if s.m_max < 0:
            raise ConfigError("solver.m_max must be non-negative")
        a = self.sweep.alphas
        if a is not None:
            if not a or any(not x > 0.0 for x in a):
                raise ConfigError("sweep.alphas must be a non-empty list of positive numbers")
            if any(y >= x for x, y in zip(a[:-1], a[1:])):
                raise ConfigError("sweep.alphas must be strictly decreasing")
        if any(not x > 0.0 for x in self.sweep.count_alphas):
            raise ConfigError("sweep.count_alphas must be positive")
        for ch in self.sweep.channels or ():
            parse_channel(ch)
        if self.output.format not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}")
        self.magnetic_field.profile("magnetic", "magnetic_field")
        self.potential.profile("electric", "potential")

    def field_setup(self) -> FieldSetup:
        B = self.magnetic_field.profile("magnetic", "magnetic_field")
        V = self.potential.profile("electric", "potential")
        try:
            return setup(B, V)
        except ProfileError as exc:
            raise ConfigError(str(exc)) from None


_LIST_KEYS = ("alphas", "channels", "count_alphas")
_STR_KEYS = ("method", "format", "csv", "json")


def _section(cls, d, name):
    if d is None:
        return cls()
    if not isinstance(d, dict):
        raise ConfigError(f"{name}: expected an object")
    fields = cls.__dataclass_fields__
    unknown = set(d) - set(fields)
    if unknown:
        raise ConfigError(f"{name}: unknown keys {sorted(unknown)}")
    kw = {}
    for key, value in d.items():
        default = fields[key].default
        try:
            if key in _LIST_KEYS:
                if value is None and key != "count_alphas":
                    kw[key] = None
                    continue
                if not isinstance(value, list):
                    raise TypeError("expected a list")
            elif key in _STR_KEYS:
                if value is not None and not isinstance(value, str):
                    raise TypeError("expected a string")
                if value is None and key not in ("csv", "json"):
                    raise TypeError("must not be null")
            elif value is None or isinstance(value, (list, dict, str)):
                raise TypeError("expected a number")
            if value is None:
                kw[key] = None
            elif isinstance(value, list):
                kw[key] = tuple(str(v) if key == "channels" else float(v) for v in value)
            elif isinstance(default, bool) or isinstance(value, bool):
                raise TypeError(f"{key} must not be a boolean")
            elif isinstance(default, int):
                if float(value) != int(value):
                    raise ValueError(f"{key} must be an integer")
                kw[key] = int(value)
            elif isinstance(default, float):
                kw[key] = float(value)
            else:
                kw[key] = value
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}.{key}: {exc}") from None
    return cls(**kw)


def parse_channel(text: str) -> Channel:
    try:
        return Channel.parse(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad channel {text!r} (expected m,spin with spin + or -): {exc}") \
            from None


# ---------------------------------------------------------------- report serialisation


def _g(x) -> str:
    return format(float(x), ".17g")


def report_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in report.rows:
        w.writerow([r.channel.m, "+" if r.channel.spin > 0 else "-", _g(r.alpha),
                    _g(r.lambda_numeric), _g(r.lambda_predicted), _g(r.ratio), r.method,
                    _g(r.residual)])
    return buf.getvalue()


def _json_float(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def report_json(report: SweepReport) -> dict:
    rows = []
    for r in report.rows:
        rows.append({"channel": str(r.channel), "m": r.channel.m, "spin": r.channel.spin,
                     "alpha": r.alpha, "regime": r.regime, "mu": r.mu, "v": _json_float(r.v),
                     "lambda_numeric": _json_float(r.lambda_numeric),
                     "lambda_predicted": _json_float(r.lambda_predicted),
                     "ratio": _json_float(r.ratio), "method": r.method,
                     "residual": _json_float(r.residual),
                     "trial_quotient": _json_float(r.trial_quotient),
                     "energy_ok": r.energy_ok, "note": r.note, "error": r.error})
    fits = [{"channel": str(f.channel), "exponent": f.exponent, "goodness": f.goodness,
             "alpha_min": f.alpha_min, "alpha_max": f.alpha_max,
             "constant": _json_float(f.constant)} for f in report.fits]
    counts = [{"alpha": a, "total": t, "Nprime": n} for a, t, n in report.count_table]
    return {"setup": report.setup, "rows": rows, "fits": fits, "count_table": counts}


# ---------------------------------------------------------------- subcommands


def _emit(text, out=None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def describe_data(s: FieldSetup) -> dict:
    chans = []
    for ch, regime, mu in virtual_channels(s):
        mode = zero_mode(s, ch)
        entry = {"channel": str(ch), "regime": regime, "mu": mu, "decay_class": mode.decay_class,
                 "v": mode.v_coeff, "norm_sq": _json_float(mode.norm_sq)}
        if regime == POWER:
            entry["c_mu"] = c_mu(mu)
        chans.append(entry)
    return {"flux": s.flux, "integer_flux": s.integer_flux, "N": s.N, "Nprime": s.Nprime,
            "R": s.R, "virtual_channels": chans}


def cmd_describe(args, cfg):
    data = describe_data(cfg.field_setup())
    if args.format == "json":
        _emit(_dump_json(data), args.out)
        return EXIT_OK
    lines = [f"flux Phi = {data['flux']:.12g}" + (" (integer)" if data["integer_flux"] else ""),
             f"N = {data['N']}  N' = {data['Nprime']}  R = {data['R']:g}",
             "virtual channels:"]
    for c in data["virtual_channels"]:
        extra = f"  c_mu = {c['c_mu']:.12g}" if "c_mu" in c else ""
        lines.append(f"  {c['channel']:>7}  {c['regime']:<11} mu = {c['mu']:g}  "
                     f"v = {c['v']:.12g}  norm_sq = {c['norm_sq']}{extra}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_predict(args, cfg):
    if args.alpha is None:
        raise ConfigError("predict needs --alpha")
    preds = predict_pauli(cfg.field_setup(), args.alpha)
    items = [{"channel": str(p.channel), "regime": p.regime, "mu": p.mu, "v": p.v,
              "lambda_leading": p.lambda_leading, "ln_abs_lambda": p.log_abs_lambda,
              "lambda_refined": p.lambda_refined, "remainder": p.remainder_order}
             for p in preds]
    if args.format == "json":
        _emit(_dump_json({"alpha": args.alpha, "predictions": items}), args.out)
    else:
        lines = [f"{i['channel']:>7}  {i['regime']:<11} mu = {i['mu']:g}  "
                 f"lambda ~ {i['lambda_leading']:.10g}  (ln|lambda| = {i['ln_abs_lambda']:.10g}; "
                 f"{i['remainder']})" for i in items]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_solve(args, cfg):
    if args.alpha is None or args.channel is None:
        raise ConfigError("solve needs --alpha and --channel")
    s = cfg.field_setup()
    ch = parse_channel(args.channel)
    method = args.method or cfg.solver.method
    row = solve_row(s, ch, args.alpha, method, fem_options=cfg.solver.fem_options())
    if not row.ok:
        print(f"solver failure in {ch} at alpha={args.alpha:g}: {row.error}", file=sys.stderr)
        return EXIT_SOLVER
    report = SweepReport({"flux": s.flux}, [row])
    text = report_csv(report) if args.format == "csv" else _dump_json(report_json(report))
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args, cfg):
    s = cfg.field_setup()
    sw = cfg.sweep
    channels = None if sw.channels is None else [parse_channel(c) for c in sw.channels]
    if args.channel:
        channels = [parse_channel(args.channel)]
    alphas = [args.alpha] if args.alpha is not None else sw.alphas
    report = sweep(s, alphas, channels, args.method or cfg.solver.method,
                   count_alphas=sw.count_alphas, m_max=args.mmax or cfg.solver.m_max,
                   fem_options=cfg.solver.fem_options())
    fmt = args.format
    out = args.out
    # config output paths are used when no --out is given
    if out is None and (cfg.output.csv or cfg.output.json):
        if cfg.output.csv:
            _emit(report_csv(report), cfg.output.csv)
        if cfg.output.json:
            _emit(_dump_json(report_json(report)), cfg.output.json)
    else:
        _emit(report_csv(report) if fmt == "csv" else _dump_json(report_json(report)), out)
    failed = [r for r in report.rows if not r.ok]
    for r in failed:
        log.warning("row %s alpha=%g failed: %s", r.channel, r.alpha, r.error)
    return EXIT_SOLVER if report.rows and len(failed) == len(report.rows) else EXIT_OK


def cmd_hardy(args, cfg):
    s = cfg.field_setup()
    m_max = args.mmax if args.mmax is not None else cfg.solver.m_max
    try:
        cert = certify_setup(s, m_max, strict=False)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    data = {"alpha_c": _json_float(cert.alpha_c), "m_max": m_max, "decay_ok": cert.decay_ok,
            "log_sup": cert.log_sup, "moment_sups": cert.moment_sups,
            "channels": [{"channel": str(c.channel), "muck_sup": c.muck_sup,
                          "alpha_threshold": _json_float(c.alpha_threshold),
                          "argmax": _json_float(c.argmax)} for c in cert.per_channel]}
    if args.format == "json":
        _emit(_dump_json(data), args.out)
    else:
        lines = [f"alpha_c = {cert.alpha_c:.10g} over {len(cert.per_channel)} non-virtual "
                 f"channels with |m| <= {m_max}",
                 f"decay in |m| beyond the virtual window: {'ok' if cert.decay_ok else 'FAILED'}"]
        lines += [f"  {c.channel!s:>8}  sup = {c.muck_sup:.6e}  alpha <= {c.alpha_threshold:.6g}"
                  for c in cert.per_channel]
        _emit("\n".join(lines) + "\n", args.out)
    if not cert.decay_ok:
        log.error("certificates do not decay in |m|; uniformity beyond m_max is not established")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args, cfg):
    from .acceptance import run_all

    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise ConfigError(f"bad --criteria {args.criteria!r}") from None
    results = run_all(numbers, echo=lambda line: print(line, flush=True))
    if args.out:
        _emit(_dump_json([{"criterion": r.number, "title": r.title, "passed": r.passed,
                           "detail": r.detail, "seconds": r.seconds} for r in results]), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {"describe": cmd_describe, "predict": cmd_predict, "solve": cmd_solve,
            "sweep": cmd_sweep, "verify": cmd_verify, "hardy": cmd_hardy}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pauli-weakbind", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--alpha", type=float, help="coupling constant")
    p.add_argument("--channel", help="channel as m,spin (e.g. -1,-)")
    p.add_argument("--method", choices=METHODS, help="eigenvalue method")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--mmax", type=int, help="largest |m| for counts and certificates")
    p.add_argument("--format", choices=FORMATS, default=None, help="output format")
    p.add_argument("--criteria", help="verify: comma-separated criterion numbers")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _join_channel(argv):
    """``--channel -1,-`` would be read as an option; glue the value on."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--channel":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--channel={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_channel(argv))
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = None
        if args.command != "verify":
            if not args.config:
                raise ConfigError(f"{args.command} needs --config")
            cfg = RunConfig.load(args.config)
        if args.format is None:
            args.format = cfg.output.format if cfg is not None else "csv"
        if args.alpha is not None and not args.alpha > 0.0:
            raise ConfigError("--alpha must be positive")
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoRootError, StiffnessError, TruncationError, BesselOverflowError,
            GrowthClassError, DecayCheckError, ArithmeticError) as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main():
    sys.exit(run())
