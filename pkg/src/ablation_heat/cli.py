"""Command-line front end (``ablation-heat`` / ``python -m ablation_heat``).

Exit codes: 0 success, 1 invalid input, 2 a numerical result could not be
delivered to the requested accuracy (quadrature failure or a blown-up march).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from . import fd_oracle as fd
from . import finite_spectral as fs
from . import infinite_hyperbolic as ih
from . import infinite_parabolic as ip
from . import specfun as sf
from .errors import AccuracyError, BranchError, DomainError, InstabilityError, ParameterError, ShapeError
from .params import CONFIG_KEYS, DESK_CASE, PhysicalParams, derive_params, dump_config, load_config, params_from_mapping
from .profile import Model, TemperatureProfile, fmt
from .verify import SUITES, run_suites

EXIT_OK, EXIT_INVALID, EXIT_ACCURACY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class SampleSpec:
    """``min:max:count[:lin|log]`` or a single value."""

    lo: float
    hi: float
    count: int
    scale: str = "lin"

    def __post_init__(self):
        if self.count < 1:
            raise ParameterError("count", "sample count must be >= 1")
        if self.count > 1 and not self.lo < self.hi:
            raise ParameterError("range", f"need min < max, got {self.lo!r}:{self.hi!r}")
        if self.scale not in ("lin", "log"):
            raise ParameterError("scale", f"expected lin or log, got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise ParameterError("range", "log spacing needs min > 0")

    @classmethod
    def parse(cls, text: str) -> "SampleSpec":
        parts = text.split(":")
        try:
            if len(parts) == 1:
                v = float(parts[0])
                return cls(v, v, 1)
            if len(parts) in (3, 4):
                scale = parts[3] if len(parts) == 4 else "lin"
                return cls(float(parts[0]), float(parts[1]), int(parts[2]), scale)
        except ValueError:
            pass
        raise ParameterError("samples", f"expected value or min:max:count[:lin|log], got {text!r}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class RunSpec:
    command: str
    params: PhysicalParams
    output: Optional[str]
    t_samples: Optional[SampleSpec] = None
    r_samples: Optional[SampleSpec] = None


# ---------------------------------------------------------------------------
# argument parsing


def _common(sub):
    sub.add_argument("--config", help="flat 'name = value' parameter file")
    sub.add_argument("--output", "-o", help="write CSV here instead of stdout")
    for key in CONFIG_KEYS:
        sub.add_argument(f"--{key}", dest=f"set_{key}", metavar="VALUE",
                         help=f"override {key}" + (" ('none' = infinite medium)" if key == "r1" else ""))


def _sampling(sub):
    sub.add_argument("--r", help="radius or rmin:rmax:count[:lin|log] [m]")
    sub.add_argument("--t", help="time or tmin:tmax:count[:lin|log] [s]")
    sub.add_argument("--t-max", type=float, help="shorthand for --t 0:T:count")
    sub.add_argument("--t-count", type=int, default=7, help="time samples with --t-max (default 7)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ablation-heat", description="Spherical ablation heat transients.")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs.required = True

    p = subs.add_parser("params", help="print the derived constants")
    _common(p)
    p.add_argument("--dump", action="store_true", help="print the parameters as a config file")

    p = subs.add_parser("steady", help="steady-state temperature")
    _common(p)
    p.add_argument("--r", help="radius or rmin:rmax:count[:lin|log] [m]")

    p = subs.add_parser("transient", help="temperature profile T(t, r)")
    _common(p)
    _sampling(p)
    p.add_argument("--model", required=True, choices=[m.value for m in Model if not m.value.startswith("oracle")])
    p.add_argument("--quadrature", action="store_true",
                   help="parabolic-infinite: integrate the exact transform instead of the closed form")
    p.add_argument("--n-max", type=int, default=400, help="finite models: number of modes")

    p = subs.add_parser("eigen", help="shell eigenvalues and expansion coefficients")
    _common(p)
    p.add_argument("--n-max", type=int, default=400)

    p = subs.add_parser("series", help="shell series solution (alias of transient for finite models)")
    _common(p)
    _sampling(p)
    p.add_argument("--model", default="parabolic", choices=["parabolic", "hyperbolic"])
    p.add_argument("--n-max", type=int, default=400)

    p = subs.add_parser("oracle", help="finite-difference reference solution")
    _common(p)
    _sampling(p)
    p.add_argument("--scheme", default="parabolic", choices=["parabolic", "hyperbolic"])
    p.add_argument("--nr", type=int, default=981, help="radial grid points")
    p.add_argument("--no-refine", action="store_true", help="skip the Richardson refinement")
    p.add_argument("--front", help="hyperbolic: also detect the wavefront and write front.csv here")

    p = subs.add_parser("specfun", help="evaluate a special function: NAME ARGS...")
    _common(p)
    p.add_argument("name", choices=sorted(SPECFUNS))
    p.add_argument("args", nargs="*", type=float)

    p = subs.add_parser("verify", help="run built-in property suites")
    _common(p)
    p.add_argument("--suite", default="all", choices=["all"] + list(SUITES))

    p = subs.add_parser("compare", help="parabolic, hyperbolic and oracle side by side on the shell")
    _common(p)
    _sampling(p)
    p.add_argument("--oracle-scheme", default="hyperbolic", choices=["parabolic", "hyperbolic"])
    p.add_argument("--nr", type=int, default=981)
    p.add_argument("--linf", help="write per-time-slice Linf differences here")
    p.add_argument("--n-max", type=int, default=400)
    return parser


def _params(ns) -> PhysicalParams:
    base = load_config(ns.config, DESK_CASE) if ns.config else DESK_CASE
    overrides = {k: getattr(ns, f"set_{k}") for k in CONFIG_KEYS if getattr(ns, f"set_{k}") is not None}
    p = params_from_mapping(overrides, base)
    p.validate()
    return p


def _radii(ns, p: PhysicalParams) -> np.ndarray:
    if getattr(ns, "r", None):
        return SampleSpec.parse(ns.r).values()
    outer = p.r1 if p.r1 is not None else 10.0 * p.r0
    return np.linspace(p.r0, outer, 5)


def _times(ns) -> np.ndarray:
    if ns.t:
        return SampleSpec.parse(ns.t).values()
    if ns.t_max is not None:
        if ns.t_count == 1:
            return np.array([ns.t_max])
        return SampleSpec(0.0, ns.t_max, ns.t_count).values()
    raise ParameterError("t", "give --t or --t-max")


def _need_shell(p):
    if p.r1 is None:
        raise ParameterError("r1", "this command needs a finite shell (set r1)")


# ---------------------------------------------------------------------------
# commands


def cmd_params(ns, p, out):
    if ns.dump:
        out.write(dump_config(p))
        return
    dp = derive_params(p)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["name", "value"])
    for f in fields(p):
        v = getattr(p, f.name)
        w.writerow([f.name, "none" if v is None else fmt(v)])
    for f in fields(dp):
        w.writerow([f.name, fmt(getattr(dp, f.name))])


def cmd_steady(ns, p, out):
    dp = derive_params(p)
    r = _radii(ns, p)
    T = fs.steady_state(r, dp, p) if p.r1 is not None else ip.steady_state(r, dp, p)
    if p.r1 is not None and (np.any(r < p.r0) or np.any(r > p.r1)):
        raise DomainError(f"r outside the shell [{p.r0}, {p.r1}]")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["r", "T"])
    for ri, Ti in zip(r, np.atleast_1d(T)):
        w.writerow([fmt(ri), fmt(Ti)])


def _finite_profile(model, times, radii, p, n_max):
    _need_shell(p)
    dp = derive_params(p)
    modes = fs.build_modes(p, dp, model, fs.SeriesControl(n_max=n_max))
    return fs.profile(times, radii, modes, p, dp, model)


def cmd_transient(ns, p, out):
    model = Model(ns.model)
    times, radii = _times(ns), _radii(ns, p)
    if np.any(times < 0):
        raise DomainError("times must be >= 0")
    dp = derive_params(p)
    if model is Model.PARABOLIC_INFINITE:
        mode = ip.Mode.FULL_QUADRATURE if ns.quadrature else ip.Mode.SMALL_ELECTRODE
        prof = ip.profile(times, radii, dp, p, mode)
    elif model is Model.HYPERBOLIC_INFINITE:
        prof = ih.profile(times, radii, dp, p)
    else:
        prof = _finite_profile(model, times, radii, p, ns.n_max)
    prof.to_csv(out)


def cmd_series(ns, p, out):
    model = Model.PARABOLIC_FINITE if ns.model == "parabolic" else Model.HYPERBOLIC_FINITE
    _finite_profile(model, _times(ns), _radii(ns, p), p, ns.n_max).to_csv(out)


def cmd_eigen(ns, p, out):
    _need_shell(p)
    dp = derive_params(p)
    modes = fs.build_modes(p, dp, Model.HYPERBOLIC_FINITE, fs.SeriesControl(n_max=ns.n_max))
    out.write(modes.to_csv())


def _scheme(name):
    return fd.Scheme.EXPLICIT_PARABOLIC if name == "parabolic" else fd.Scheme.EXPLICIT_HYPERBOLIC


def _oracle(p, scheme, times, radii, nr, refine=True):
    dp = derive_params(p)
    positive = times[times > 0]
    model = Model.ORACLE_PARABOLIC if scheme is fd.Scheme.EXPLICIT_PARABOLIC else Model.ORACLE_HYPERBOLIC
    rows = []
    if times.size > positive.size:
        rows.append(np.full(radii.size, p.T_ambient))
    if positive.size:
        prof = fd.resample(fd.oracle_profile(p, dp, scheme, positive, nr=nr, refine=refine), radii)
        rows.extend(prof.as_grid()[2])
    return TemperatureProfile.from_grid(model, np.unique(times), radii, np.array(rows), dp)


def cmd_oracle(ns, p, out):
    _need_shell(p)
    dp = derive_params(p)
    scheme = _scheme(ns.scheme)
    times, radii = np.unique(_times(ns)), _radii(ns, p)
    _oracle(p, scheme, times, radii, ns.nr, refine=not ns.no_refine).to_csv(out)
    if ns.front:
        if scheme is not fd.Scheme.EXPLICIT_HYPERBOLIC:
            front = []
        else:
            grid = fd.make_grid(p, dp, scheme, ns.nr, float(times.max()), n_save=ns.nr - 1, safety=1.0)
            front = fd.detect_wavefront(fd.solve_hyperbolic(p, dp, grid), dp, p.tau)
        with open(ns.front, "w", newline="") as fh:
            fh.write(fd.front_csv(front))


SPECFUNS = {
    "dawson": (1, lambda x: (float(sf.dawson(x)), 0.0)),
    "dawson_derivative": (1, lambda x: (float(sf.dawson_derivative(x)), 0.0)),
    "si": (1, lambda x: (float(sf.sine_integral(x)), 0.0)),
    "ci": (1, lambda x: (float(sf.cosine_integral(x)), 0.0)),
    "m132": (1, lambda s: (float(sf.conf_hyp_m_1_32(s)), 0.0)),
    "s1": (2, sf.s1),
    "s1_ds": (2, sf.s1_ds),
    "s1_du": (2, sf.s1_du),
    "i1": (3, lambda sign, s, u: sf.i1_kernel(_sign(sign), s, u)),
    "j2": (3, lambda sign, s, u: sf.j2(_sign(sign), s, u)),
    "j2_ds": (3, lambda sign, s, u: sf.j2_ds(_sign(sign), s, u)),
    "s2": (2, sf.s2),
    "s2_ds": (2, sf.s2_ds),
}


def _sign(x):
    if x not in (1.0, -1.0):
        raise ParameterError("sign", "first argument must be +1 or -1")
    return int(x)


def cmd_specfun(ns, p, out):
    nargs, fn = SPECFUNS[ns.name]
    if len(ns.args) != nargs:
        raise ParameterError("args", f"{ns.name} takes {nargs} argument(s), got {len(ns.args)}")
    res = fn(*ns.args)
    value, err = (res.value, res.est_error) if isinstance(res, sf.SpecfunValue) else res
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["value", "est_error"])
    w.writerow([fmt(value), fmt(err)])


def cmd_verify(ns, p, out):
    names = list(SUITES) if ns.suite == "all" else [ns.suite]
    rows = run_suites(names)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["suite", "check", "result", "detail"])
    for suite, check, ok, detail in rows:
        w.writerow([suite, check, "PASS" if ok else "FAIL", detail])
    return EXIT_OK if all(r[2] for r in rows) else EXIT_ACCURACY


COMPARISON_HEADER = ["t", "r", "T_parabolic", "T_hyperbolic", "T_oracle"]
LINF_HEADER = ["t", "linf_parabolic_hyperbolic", "linf_parabolic_oracle", "linf_hyperbolic_oracle"]


def emit_comparison(spec: RunSpec, oracle_scheme="hyperbolic", nr=981, n_max=400):
    """Side-by-side CSV text and the per-time-slice Linf table."""
    p = spec.params
    _need_shell(p)
    times, radii = np.unique(spec.t_samples.values()), spec.r_samples.values()
    par = _finite_profile(Model.PARABOLIC_FINITE, times, radii, p, n_max).as_grid()[2]
    hyp = _finite_profile(Model.HYPERBOLIC_FINITE, times, radii, p, n_max).as_grid()[2]
    orc = _oracle(p, _scheme(oracle_scheme), times, radii, nr).as_grid()[2]
    main, linf = io.StringIO(), io.StringIO()
    w = csv.writer(main, lineterminator="\n")
    w.writerow(COMPARISON_HEADER)
    for i, t in enumerate(times):
        for j, r in enumerate(radii):
            w.writerow([fmt(t), fmt(r), fmt(par[i, j]), fmt(hyp[i, j]), fmt(orc[i, j])])
    w = csv.writer(linf, lineterminator="\n")
    w.writerow(LINF_HEADER)
    for i, t in enumerate(times):
        w.writerow([fmt(t)] + [fmt(np.max(np.abs(x[i] - y[i]))) for x, y in ((par, hyp), (par, orc), (hyp, orc))])
    return main.getvalue(), linf.getvalue()


def cmd_compare(ns, p, out):
    _need_shell(p)
    r_spec = SampleSpec.parse(ns.r) if ns.r else SampleSpec(p.r0, p.r1, 5)
    if ns.t:
        t_spec = SampleSpec.parse(ns.t)
    elif ns.t_max is not None:
        t_spec = SampleSpec(0.0, ns.t_max, ns.t_count) if ns.t_count > 1 else SampleSpec(ns.t_max, ns.t_max, 1)
    else:
        raise ParameterError("t", "give --t or --t-max")
    spec = RunSpec("compare", p, ns.output, t_spec, r_spec)
    main, linf = emit_comparison(spec, ns.oracle_scheme, ns.nr, ns.n_max)
    out.write(main)
    if ns.linf:
        with open(ns.linf, "w", newline="") as fh:
            fh.write(linf)


COMMANDS = {
    "params": cmd_params,
    "steady": cmd_steady,
    "transient": cmd_transient,
    "series": cmd_series,
    "eigen": cmd_eigen,
    "oracle": cmd_oracle,
    "specfun": cmd_specfun,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        p = _params(ns)
        buf = io.StringIO()
        code = COMMANDS[ns.command](ns, p, buf) or EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ParameterError, DomainError, BranchError, ShapeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (AccuracyError, InstabilityError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    text = buf.getvalue()
    if ns.output:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
