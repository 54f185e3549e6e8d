"""Command-line front end.

Examples::

    phasekit rep --kappa -1/3 --dim 4 --phi 0.7
    phasekit mub --dim 7 --route finite --format csv
    phasekit gauss --u 2 --v 0 --w 3
    phasekit potential --potential morse:l=4
    phasekit verify

Exit status: 0 on success, 1 when a verification exceeds tolerance, 2 on an
invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, replace

from . import mub, phase, potentials, verify
from .algebra import KappaParam, build_representation, commutator_residual
from .config import Tolerances

COMMANDS = ("rep", "phases", "vs-states", "mub", "gauss", "potential", "verify")
FORMATS = ("json", "csv", "pretty")
DEFAULT_FORMAT = {"gauss": "pretty", "verify": "pretty"}
CSV_COMMANDS = ("mub", "verify")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    kappa: str | None = None
    dim: int | None = None
    phi: float = 0.0
    p: int | None = None
    m: int | None = None
    mu: int | None = None
    route: str = "finite"
    truncated: bool = False
    open_top: bool = False
    u: int | None = None
    v: int | None = None
    w: int | None = None
    potential: str | None = None
    output: str | None = None
    format: str | None = None
    tolerances: Tolerances = Tolerances()

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        fmt = self.format or DEFAULT_FORMAT.get(self.command, "json")
        if fmt not in FORMATS:
            raise ConfigError(f"unknown format {fmt!r}")
        if fmt == "csv" and self.command not in CSV_COMMANDS:
            raise ConfigError(f"csv output is available only for {', '.join(CSV_COMMANDS)}")
        need = {
            "rep": ("kappa", "dim"),
            "phases": ("kappa", "dim"),
            "vs-states": ("kappa", "dim"),
            "mub": ("dim",),
            "gauss": ("u", "v", "w"),
            "potential": ("potential",),
            "verify": (),
        }[self.command]
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"{self.command} needs --{', --'.join(missing)}")
        if self.truncated and self.open_top:
            raise ConfigError("--truncated and --open-top are mutually exclusive")
        if self.command == "mub":
            if self.route not in ("finite", "truncated"):
                raise ConfigError("--route is finite or truncated")
            if self.route == "truncated" and self.kappa is None:
                raise ConfigError("mub --route truncated needs --kappa")
            if self.m is not None and self.p is None:
                raise ConfigError("mub --m needs --p")
        return replace(self, format=fmt)


def _kappa(text: str) -> KappaParam:
    try:
        return KappaParam.of(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad kappa {text!r}: {exc}") from None


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def format_complex(z: complex, digits: int = 8, tol: float = 1e-12) -> str:
    """``"0+1.7320508i"`` style, with parts below ``tol`` printed as 0."""
    re = 0.0 if abs(z.real) < tol else z.real
    im = 0.0 if abs(z.imag) < tol else z.imag
    sign = "-" if im < 0 else "+"
    return f"{re:.{digits}g}{sign}{abs(im):.{digits}g}i"


def _cmd_rep(cfg: RunConfig) -> tuple[str, int]:
    rep = build_representation(_kappa(cfg.kappa), cfg.phi, cfg.dim, truncated=cfg.truncated, open_top=cfg.open_top)
    payload = rep.to_json()
    check = commutator_residual(rep)
    if cfg.format == "pretty":
        lines = [f"kappa={rep.kappa} dim={rep.dim} phi={rep.phi} regime={rep.regime}",
                 f"levels F(n): {', '.join(str(f) for f in rep.levels)}",
                 f"commutator residual ({check.rhs}): {check.residual:.3e}",
                 f"trace [a-, a+]: {abs(check.trace):.3e}"]
        return "\n".join(lines) + "\n", 0
    return _dump(payload), 0


def _states_out(cfg: RunConfig, states, index) -> tuple[str, int]:
    if index is not None:
        if not 0 <= index < len(states):
            raise ConfigError(f"index {index} outside 0..{len(states) - 1}")
        states = [states[index]]
    if cfg.format == "pretty":
        lines = []
        for st in states:
            amps = " ".join(format_complex(complex(a), 6) for a in st.amplitudes)
            lines.append(f"{st.kind}={st.index} phi={st.phi}: {amps}")
        return "\n".join(lines) + "\n", 0
    return _dump([st.to_json() for st in states]), 0


def _cmd_phases(cfg: RunConfig) -> tuple[str, int]:
    return _states_out(cfg, phase.phase_states(cfg.dim, _kappa(cfg.kappa), cfg.phi), cfg.m)


def _cmd_vs_states(cfg: RunConfig) -> tuple[str, int]:
    kappa = _kappa(cfg.kappa)
    rep = build_representation(kappa, cfg.phi, cfg.dim, truncated=True)
    return _states_out(cfg, phase.vs_phase_states(rep), cfg.mu)


def _cmd_mub(cfg: RunConfig) -> tuple[str, int]:
    kappa = None if cfg.kappa is None else _kappa(cfg.kappa)
    if cfg.p is not None:
        make = (lambda m: mub.mub_state_finite(cfg.dim, cfg.p, m)) if cfg.route == "finite" \
            else (lambda m: mub.mub_state_truncated(kappa, cfg.dim, cfg.p, m))
        states = [make(m) for m in range(cfg.dim)]
        if cfg.format == "csv":
            raise ConfigError("csv output for mub covers the overlap matrix; drop --p")
        return _states_out(cfg, states, cfg.m)
    mset = mub.build_mub_set(cfg.dim, cfg.route, kappa, tol=cfg.tolerances.composite)
    status = 1 if mset.prime and not mset.complete else 0
    if cfg.format == "csv":
        return mset.overlap_csv(), status
    if cfg.format == "pretty":
        lines = [f"dim={mset.dim} route={mset.route} kappa={mset.kappa} bases={len(mset)}",
                 f"prime={mset.prime} complete={mset.complete}",
                 f"max | |<a|b>| - 1/sqrt(d) | = {mset.max_deviation():.3e}",
                 f"orthonormality residual = {mset.orthonormality:.3e}"]
        for r in mset.violations():
            lines.append(f"  biased pair p={r.p} p2={r.p2}: min={r.min:.6f} max={r.max:.6f}")
        return "\n".join(lines) + "\n", status
    return _dump(mset.to_json()), status


def _cmd_gauss(cfg: RunConfig) -> tuple[str, int]:
    params = mub.GaussSumParams(cfg.u, cfg.v, cfg.w)
    value = mub.gauss_sum(cfg.u, cfg.v, cfg.w)
    if cfg.format == "pretty":
        return format_complex(value) + "\n", 0
    return _dump({"u": cfg.u, "v": cfg.v, "w": cfg.w, "value": [value.real, value.imag],
                  "modulus": abs(value), "parity_ok": params.parity_ok}), 0


def _cmd_potential(cfg: RunConfig) -> tuple[str, int]:
    spec = potentials.parse_potential(cfg.potential)
    rep = potentials.report(spec, cfg.dim)
    status = 0 if rep["gamma_check"]["max_rel_err"] < cfg.tolerances.composite else 1
    if cfg.format == "pretty":
        lines = [f"{rep['variant']}: a={rep['a']} b={rep['b']} kappa={rep['kappa']['num']}/{rep['kappa']['den']} s={rep['s']}",
                 "energies: " + ", ".join(f"{e:g}" for e in rep["energies"]),
                 "weights:  " + ", ".join(f"{x:.6g}" for x in rep["weights"]),
                 f"gamma closed-form max rel err: {rep['gamma_check']['max_rel_err']:.3e}"]
        return "\n".join(lines) + "\n", status
    fam = potentials.physical_phase_states(spec, rep["s"], cfg.phi, cutoff=max(rep["s"], potentials.DEFAULT_CUTOFF))
    rep["phi"] = cfg.phi
    rep["phase_states"] = [st.to_json() for st in fam.fourier]
    rep["weighted_phase_states"] = [st.to_json() for st in fam.weighted]
    return _dump(rep), status


def _cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    results = verify.run_suite(cfg.tolerances)
    status = 0 if all(r.passed for r in results) else 1
    if cfg.format == "csv":
        return verify.format_csv(results), status
    if cfg.format == "json":
        return _dump({"passed": status == 0, "checks": verify.to_rows(results)}), status
    return verify.format_table(results) + "\n", status


HANDLERS = {
    "rep": _cmd_rep,
    "phases": _cmd_phases,
    "vs-states": _cmd_vs_states,
    "mub": _cmd_mub,
    "gauss": _cmd_gauss,
    "potential": _cmd_potential,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        cfg = cfg.validate()
        text, status = HANDLERS[cfg.command](cfg)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        try:
            stdout.write(text)
        except BrokenPipeError:
            pass
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--tol-matrix", type=float, help="override the matrix-identity tolerance")
    common.add_argument("--tol-composite", type=float, help="override the composite-quantity tolerance")

    parser = argparse.ArgumentParser(prog="phasekit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rep", parents=[common], help="matrix representation as JSON")
    p.add_argument("--kappa", required=True, help="rational 'p/q'")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--truncated", action="store_true")
    group.add_argument("--open-top", action="store_true")

    p = sub.add_parser("phases", parents=[common], help="|m, phi> phase states")
    p.add_argument("--kappa", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--m", type=int)

    p = sub.add_parser("vs-states", parents=[common], help="|mu, phi> eigenstates of V_s")
    p.add_argument("--kappa", required=True)
    p.add_argument("--s", "--dim", dest="dim", type=int, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--mu", type=int)

    p = sub.add_parser("mub", parents=[common], help="mutually unbiased bases and overlaps")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--route", choices=("finite", "truncated"), default="finite")
    p.add_argument("--kappa")
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)

    p = sub.add_parser("gauss", parents=[common], help="generalized quadratic Gauss sum")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--w", type=int, required=True)

    p = sub.add_parser("potential", parents=[common], help="solvable-potential spectrum report")
    p.add_argument("--potential", required=True, help="ho | pt:u=2,v=3 | morse:l=4")
    p.add_argument("--s", "--dim", dest="dim", type=int)
    p.add_argument("--phi", type=float, default=0.0)

    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    tol = Tolerances.from_env()
    if ns.tol_matrix is not None:
        tol = replace(tol, matrix=ns.tol_matrix)
    if ns.tol_composite is not None:
        tol = replace(tol, composite=ns.tol_composite)
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(tolerances=tol, **fields)


_NEGATIVE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--kappa -1/3`` into ``--kappa=-1/3`` so argparse keeps the value."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = parser.parse_args(_glue_negative_values(argv))
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        parser.error(str(exc))
    if isinstance(cfg.phi, float) and not math.isfinite(cfg.phi):
        parser.error("--phi must be finite")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
