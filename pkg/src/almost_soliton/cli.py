"""Command-line front end: ``construct``, ``verify`` and ``gallery``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
input (parse errors, domain violations, inconsistent options), 3 when the
quadrature cannot reach its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import sys
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .ansatz import RadialCoordinate, TranslationDirection, parse_profile, resolve_profile
from .construct import (RADIAL, TRANSLATION, WARPED, IntegrationConstants, SolitonData,
                        construct_radial, construct_translation, construct_warped, profile_jet)
from .dual import real
from .errors import DomainViolation, ParseError, QuadratureFailure
from .fields import Signature
from .verify import (ODE_TOL, TENSOR_TOL, ResidualReport, WarpedSpec, radial_rows,
                     residual_full_tensor, residual_pde_conformal, residual_pde_warped,
                     residual_system_radial, residual_system_translation,
                     residual_system_warped, translation_rows, warped_rho_consistency,
                     warped_rows)

log = logging.getLogger(__name__)

CSV_HEADER = ("t", "phi", "phi_1", "phi_2", "f", "f_1", "rho", "R1", "R2", "R3")
DEFAULT_WINDOWS = {TRANSLATION: (-3.0, 3.0), WARPED: (-2.0, 2.0), RADIAL: (0.1, 4.0)}
VARIABLE = {TRANSLATION: "xi", WARPED: "xi", RADIAL: "r"}


@dataclass
class RunConfig:
    family: str
    profile: str
    n: int = 3
    m: int = 2
    signature: Optional[str] = None
    alphas: Optional[tuple] = None
    c: float = 1.0
    k: float = 0.0
    base: Optional[float] = None
    window: Optional[tuple] = None
    samples: int = 256
    grid: Optional[int] = None
    box: float = 1.0
    ode_tol: float = ODE_TOL
    tensor_tol: float = TENSOR_TOL
    lambda_F: float = 0.0
    f: Optional[str] = None
    h: Optional[str] = None
    rho: Optional[str] = None
    out: Optional[str] = None
    csv: Optional[str] = None

    def resolved(self) -> "RunConfig":
        if self.family not in DEFAULT_WINDOWS:
            raise ValueError(f"unknown family {self.family!r}")
        sig = self.signature or "+" * self.n
        alphas = self.alphas or tuple([1.0] + [0.0] * (self.n - 1))
        if len(sig) != self.n:
            raise ValueError(f"signature {sig!r} does not have length n={self.n}")
        if len(alphas) != self.n:
            raise ValueError(f"alphas {alphas!r} do not have length n={self.n}")
        if self.family == RADIAL and set(sig) != {"+"}:
            raise ValueError("the radial family needs a Euclidean signature")
        window = tuple(self.window or DEFAULT_WINDOWS[self.family])
        grid = self.grid or (3 if self.family == WARPED else 5)
        return replace(self, signature=sig, alphas=tuple(float(a) for a in alphas),
                       window=window, grid=grid)

    def echo(self) -> dict:
        return {
            "family": self.family, "profile": self.profile, "n": self.n,
            "m": self.m if self.family == WARPED else 0, "signature": self.signature,
            "alphas": list(self.alphas) if self.family != RADIAL else None,
            "c": self.c, "k": self.k, "window": list(self.window), "samples": self.samples,
            "grid": self.grid, "box": self.box, "lambda_F": self.lambda_F,
        }


def _grid(dim: int, count: int, half: float) -> list:
    axis = np.linspace(-half, half, count)
    return [np.array(p) for p in itertools.product(axis, repeat=dim)]


def _construction_window(cfg: RunConfig, direction: Optional[TranslationDirection]) -> tuple:
    lo, hi = cfg.window
    if cfg.family == RADIAL:
        return lo, max(hi, cfg.n * cfg.box ** 2)
    a, b = direction.xi_range(cfg.box)
    return min(lo, a), max(hi, b)


def build(cfg: RunConfig) -> SolitonData:
    """Run the quadrature construction for ``cfg``."""
    sig = Signature.parse(cfg.signature)
    profile = resolve_profile(cfg.profile, VARIABLE[cfg.family])
    ic = IntegrationConstants(cfg.c, cfg.k, cfg.base)
    if cfg.family == RADIAL:
        RadialCoordinate.for_signature(sig)
        return construct_radial(profile, cfg.n, ic, _construction_window(cfg, None))
    d = TranslationDirection(cfg.alphas, sig)
    window = _construction_window(cfg, d)
    if cfg.family == TRANSLATION:
        return construct_translation(profile, cfg.n, d, ic, window)
    return construct_warped(profile, cfg.n, cfg.m, d, ic, window)


def assemble(cfg: RunConfig) -> SolitonData:
    """Hand-assembled data from ``--f``/``--h``/``--rho`` expressions (no quadrature)."""
    var = VARIABLE[cfg.family]
    sig = Signature.parse(cfg.signature)
    phi = resolve_profile(cfg.profile, var)
    if cfg.rho is None:
        raise ValueError("verify needs --rho")
    rho = parse_profile(cfg.rho, var)
    if cfg.family == WARPED:
        if cfg.f is None or cfg.h is None:
            raise ValueError("verify --family warped needs --f (warping) and --h (potential)")
        warping, potential = parse_profile(cfg.f, var), parse_profile(cfg.h, var)
    else:
        if cfg.f is None:
            raise ValueError("verify needs --f")
        warping, potential = None, parse_profile(cfg.f, var)
    direction = None if cfg.family == RADIAL else TranslationDirection(cfg.alphas, sig)
    if cfg.family == RADIAL:
        RadialCoordinate.for_signature(sig)
    return SolitonData(cfg.family, sig, phi, potential, rho, IntegrationConstants(cfg.c, cfg.k, 0.0),
                       direction=direction, m=cfg.m if cfg.family == WARPED else 0,
                       lambda_F=cfg.lambda_F, warping=warping)


def run_checks(sd: SolitonData, cfg: RunConfig) -> list[ResidualReport]:
    samples = np.linspace(cfg.window[0], cfg.window[1], cfg.samples)
    base_points = _grid(sd.n, cfg.grid, cfg.box)
    phi_f, pot_f, rho_f = sd.lift(sd.phi), sd.lift(sd.potential), sd.lift(sd.rho)
    reports = []
    if sd.family == WARPED:
        spec = WarpedSpec(sd.n, sd.m, cfg.lambda_F)
        reports.append(residual_system_warped(sd, spec, samples, cfg.ode_tol))
        reports.append(warped_rho_consistency(sd, spec, samples, cfg.ode_tol))
        reports.append(residual_pde_warped(phi_f, sd.lift(sd.warping), pot_f, rho_f,
                                           sd.signature, spec, base_points, cfg.ode_tol))
        if cfg.lambda_F == 0.0:
            reports.append(residual_full_tensor(sd, _grid(sd.n + sd.m, cfg.grid, cfg.box), spec,
                                                cfg.tensor_tol))
        else:
            log.info("lambda_F != 0: full-tensor check needs a flat fiber, skipped")
        return reports
    if sd.family == RADIAL:
        reports.append(residual_system_radial(sd, samples, cfg.ode_tol))
    else:
        reports.append(residual_system_translation(sd, samples, cfg.ode_tol))
    reports.append(residual_pde_conformal(phi_f, pot_f, rho_f, sd.signature, base_points,
                                          cfg.ode_tol))
    reports.append(residual_full_tensor(sd, base_points, tol=cfg.tensor_tol))
    return reports


def sample_rows(sd: SolitonData, cfg: RunConfig) -> list[tuple]:
    rows = []
    for t in np.linspace(cfg.window[0], cfg.window[1], cfg.samples):
        t = float(t)
        phi = tuple(map(real, profile_jet(sd.phi, t)))
        pot = tuple(map(real, profile_jet(sd.potential, t)))
        rho = real(sd.rho(t))
        if sd.family == WARPED:
            w = tuple(map(real, profile_jet(sd.warping, t)))
            res = warped_rows(sd.n, sd.m, sd.eps_i0, cfg.lambda_F, phi, w, pot, rho)
        elif sd.family == RADIAL:
            res = radial_rows(sd.n, t, phi, pot, rho) + (None,)
        else:
            res = translation_rows(sd.n, sd.eps_i0, phi, pot, rho) + (None,)
        rows.append((t,) + phi + pot[:2] + (rho,) + tuple(res))
    return rows


def make_report(cfg: RunConfig, sd: SolitonData, reports: list[ResidualReport]) -> dict:
    rows = sample_rows(sd, cfg)
    doc = cfg.echo()
    doc.update({
        "eps_i0": sd.eps_i0 if sd.direction is not None else None,
        "base": sd.constants.base,
        "checks": [r.summary() for r in reports],
        "skipped_points": sum(r.skipped for r in reports),
        "pass": all(r.passed for r in reports),
        "sample_columns": list(CSV_HEADER),
        "samples_table": [list(r) for r in rows],
    })
    return doc


def write_outputs(cfg: RunConfig, doc: dict) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for row in doc["samples_table"]:
                w.writerow(["" if v is None else repr(float(v)) for v in row])


def print_checks(doc: dict, title: str = "", stream=None) -> None:
    stream = stream or sys.stdout
    if title:
        print(title, file=stream)
    for ch in doc["checks"]:
        flag = "PASS" if ch["pass"] else "FAIL"
        print(f"  {flag}  {ch['name']:<16} sup={ch['sup']:.3e}  rms={ch['rms']:.3e}  "
              f"tol={ch['tol']:.1e}  skipped={ch['skipped']}", file=stream)


def exit_code(doc: dict) -> int:
    return 0 if doc["pass"] else 1


def run_construct(cfg: RunConfig) -> tuple[int, dict]:
    cfg = cfg.resolved()
    sd = build(cfg)
    doc = make_report(cfg, sd, run_checks(sd, cfg))
    doc["mode"] = "construct"
    return exit_code(doc), doc


def run_verify(cfg: RunConfig) -> tuple[int, dict]:
    cfg = cfg.resolved()
    sd = assemble(cfg)
    doc = make_report(cfg, sd, run_checks(sd, cfg))
    doc["mode"] = "verify"
    return exit_code(doc), doc


GALLERY = (
    ("A", RunConfig(TRANSLATION, "paperA", n=3)),
    ("A", RunConfig(TRANSLATION, "paperA", n=4)),
    ("B", RunConfig(WARPED, "paperB", n=3, m=2)),
    ("C", RunConfig(RADIAL, "paperC", n=3)),
)


def gallery_configs(tol: Optional[float] = None, signature: Optional[str] = None,
                    alphas: Optional[tuple] = None) -> list:
    out = []
    for name, cfg in GALLERY:
        if tol is not None:
            cfg = replace(cfg, ode_tol=tol, tensor_tol=tol)
        if cfg.family == TRANSLATION:
            if signature is not None and len(signature) == cfg.n:
                cfg = replace(cfg, signature=signature)
            if alphas is not None and len(alphas) == cfg.n:
                cfg = replace(cfg, alphas=alphas)
        out.append((name, cfg))
    return out


def run_gallery(tol=None, signature=None, alphas=None, out=None) -> int:
    docs = []
    first_failure = None
    print(f"{'case':<5}{'family':<12}{'n':>3}{'m':>3}  {'check':<16}{'sup':>12}{'tol':>10}  result")
    for name, cfg in gallery_configs(tol, signature, alphas):
        _, doc = run_construct(cfg)
        doc["case"] = name
        docs.append(doc)
        for ch in doc["checks"]:
            print(f"{name:<5}{doc['family']:<12}{doc['n']:>3}{doc['m']:>3}  {ch['name']:<16}"
                  f"{ch['sup']:>12.3e}{ch['tol']:>10.1e}  {'PASS' if ch['pass'] else 'FAIL'}")
        if not doc["pass"] and first_failure is None:
            first_failure = f"case {name} ({doc['family']}, n={doc['n']})"
    if out:
        with open(out, "w") as fh:
            json.dump({"cases": [{k: v for k, v in d.items() if k != "samples_table"}
                                 for d in docs],
                       "pass": first_failure is None}, fh, indent=2)
            fh.write("\n")
    if first_failure is not None:
        print(f"gallery failed: {first_failure}", file=sys.stderr)
        return 1
    print("gallery: all cases pass")
    return 0


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _window(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("window must be lo,hi")
    return vals


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=[TRANSLATION, RADIAL, WARPED])
    p.add_argument("--profile", required=True, help="catalog name or expression in xi / r")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=2, help="fiber dimension (warped)")
    p.add_argument("--signature", help="string of +/- of length n (default all +)")
    p.add_argument("--alphas", type=_floats, help="comma-separated direction, default 1,0,...")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--base", type=float, default=None)
    p.add_argument("--window", type=_window, help="sampling window lo,hi of the invariant")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--grid", type=int, help="grid points per axis for field checks")
    p.add_argument("--box", type=float, default=1.0, help="grid half-width")
    p.add_argument("--ode-tol", type=float, default=ODE_TOL)
    p.add_argument("--tensor-tol", type=float, default=TENSOR_TOL)
    p.add_argument("--tol", type=float, help="override every tolerance")
    p.add_argument("--out", help="structured JSON report")
    p.add_argument("--csv", help="samples table")
    p.add_argument("-v", "--verbose", action="store_true")


# Options whose values may start with '-' (signatures, negative reals).
_VALUE_OPTS = {"--signature", "--alphas", "--window", "--c", "--k", "--base", "--f", "--h",
               "--rho", "--profile", "--lambda-f"}


def _merge_values(argv: list) -> list:
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="almost-soliton",
                                  description="Construct and verify gradient Ricci almost solitons.")
    sub = top.add_subparsers(dest="command", required=True)
    c = sub.add_parser("construct", help="quadrature construction plus all residual checks")
    _add_common(c)
    v = sub.add_parser("verify", help="check hand-made phi, f (h), rho without construction")
    _add_common(v)
    v.add_argument("--f", help="potential (conformal families) or warping function (warped)")
    v.add_argument("--h", help="potential of the warped family")
    v.add_argument("--rho", help="soliton function")
    v.add_argument("--lambda-f", dest="lambda_f", type=float, default=0.0)
    g = sub.add_parser("gallery", help="reproduce the three example families")
    g.add_argument("--tol", type=float)
    g.add_argument("--signature")
    g.add_argument("--alphas", type=_floats)
    g.add_argument("--out")
    g.add_argument("-v", "--verbose", action="store_true")
    return top


def _config(args) -> RunConfig:
    ode_tol, tensor_tol = args.ode_tol, args.tensor_tol
    if args.tol is not None:
        ode_tol = tensor_tol = args.tol
    return RunConfig(
        family=args.family, profile=args.profile, n=args.n, m=args.m, signature=args.signature,
        alphas=args.alphas, c=args.c, k=args.k, base=args.base, window=args.window,
        samples=args.samples, grid=args.grid, box=args.box, ode_tol=ode_tol,
        tensor_tol=tensor_tol, lambda_F=getattr(args, "lambda_f", 0.0),
        f=getattr(args, "f", None), h=getattr(args, "h", None), rho=getattr(args, "rho", None),
        out=args.out, csv=args.csv,
    )


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser().parse_args(_merge_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gallery":
            return run_gallery(args.tol, args.signature, args.alphas, args.out)
        cfg = _config(args)
        runner = run_construct if args.command == "construct" else run_verify
        code, doc = runner(cfg)
        write_outputs(cfg, doc)
        print_checks(doc, f"{args.command} {cfg.family} profile={cfg.profile}: "
                          f"{'PASS' if doc['pass'] else 'FAIL'}")
        return code
    except (ParseError, DomainViolation, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureFailure as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
