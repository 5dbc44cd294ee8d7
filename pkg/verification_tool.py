import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from helpers.log import Log
from helpers.print_style import PrintStyle
from helpers.strings import finite_or_max, format_number
from radial import functions, specfun
from radial.errors import InvalidArgumentError
from radial.fracint import (
    TWO_OVER_SQRT_PI,
    adjoint_defect,
    bessel_orthogonality_defect,
    ek_i_apply,
    ek_k_apply,
    i_sine_defect,
    rooney_defect,
)
from radial.grid import RadialGrid, SampledFunction, make_grid, sample
from radial.hilbert import he_apply, he_of_ho, he_via_transforms, ho_apply, ho_of_he, ho_via_transforms
from radial.opmatrix import build_matrix, commutator_norm, min_eigenvalue, quadratic_form, symmetry_defect
from radial.quadrature import DEFAULT_SETTINGS, QuadratureSettings
from radial.radialops import (
    OperatorKind,
    OperatorSpec,
    Realization,
    deficiency_check,
    fd_second_derivative,
    pplus_apply,
    pr2_apply,
    shift_demo,
    spectral_second_derivative,
    zinv_apply,
    zinv_fractional,
    zinv_quad,
    zinv_spectral_quad,
    zplus_discrete,
    zplus_quad,
    zplus_spectral_quad,
)
from radial.transforms import DstMatrixModel, continuum_scale, derivative_identity_defect, fs_quad

SUITES = ("involution", "hilbert", "sqrt", "inverse", "fracint", "positivity", "nonhermitian", "specfun")

# grid echoed in each suite's report; quadrature-only suites echo the default grid
DEFAULT_GRID = make_grid(40.0, 4095)
SUITE_GRIDS = {
    "involution": make_grid(1.0, 2048),
    "sqrt": make_grid(10.0, 256),
    "inverse": make_grid(10.0, 256),
    "fracint": make_grid(10.0, 256),
    "positivity": make_grid(1.0, 256),
    "nonhermitian": make_grid(8.0, 16383),
}

SAMPLE_RADII = (0.5, 1.0, 2.0, 5.0)
SEED = 42


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.defect) and self.defect <= self.tol

    def output(self) -> dict:
        return {"name": self.name, "defect": finite_or_max(self.defect), "tol": self.tol, "pass": self.passed}


@dataclass
class VerificationReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    grid: RadialGrid = DEFAULT_GRID
    settings: QuadratureSettings = DEFAULT_SETTINGS

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def worst(self) -> CheckResult | None:
        if not self.checks:
            return None
        return max(self.checks, key=lambda c: finite_or_max(c.defect) / c.tol if c.tol > 0 else finite_or_max(c.defect))

    def output(self) -> dict:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "checks": [check.output() for check in self.checks],
            "grid": {"R": self.grid.R, "N": self.grid.N},
        }

    def to_json(self) -> str:
        return json.dumps(self.output())

    def to_table(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"{'check':<{width}}  {'defect':>24}  {'tol':>24}  result"]
        for c in self.checks:
            lines.append(
                f"{c.name:<{width}}  {format_number(finite_or_max(c.defect)):>24}  "
                f"{format_number(c.tol):>24}  {'PASS' if c.passed else 'FAIL'}"
            )
        lines.append(f"suite {self.suite} (R={format_number(self.grid.R)}, N={self.grid.N}): {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def _relative(a, b) -> float:
    scale = float(np.max(np.abs(np.asarray(b, dtype=float)))) or 1.0
    return _max_abs(a, b) / scale


class VerificationTool:
    """Runs the verification suites; every check is logged as a 'check' item and printed."""

    def __init__(self, settings: QuadratureSettings = DEFAULT_SETTINGS, tolerance: float | None = None, quiet: bool = False):
        if tolerance is not None and not (tolerance >= 0 and math.isfinite(tolerance)):
            raise InvalidArgumentError(f"tolerance must be finite and non-negative, got {tolerance!r}")
        self.settings = settings
        self.tolerance = tolerance
        self.quiet = quiet
        self.log = Log()
        self.prompts_dir = os.path.join(os.path.dirname(__file__), "prompts")
        self.suites: dict[str, Callable[[], None]] = {
            "involution": self.suite_involution,
            "hilbert": self.suite_hilbert,
            "sqrt": self.suite_sqrt,
            "inverse": self.suite_inverse,
            "fracint": self.suite_fracint,
            "positivity": self.suite_positivity,
            "nonhermitian": self.suite_nonhermitian,
            "specfun": self.suite_specfun,
        }

    def read_prompt(self, filename: str, **kwargs) -> str:
        filepath = os.path.join(self.prompts_dir, filename)
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                content = f.read()
            for key, value in kwargs.items():
                content = content.replace(f"{{{{{key}}}}}", str(value))
            return content.strip()
        except FileNotFoundError:
            return f"[Prompt file not found: {filename}]"

    def check(self, name: str, defect: float, tol: float) -> CheckResult:
        result = CheckResult(name, float(defect), float(tol if self.tolerance is None else self.tolerance))
        item = self.log.log(type="check", heading=name, kvps={"defect": result.defect, "tol": result.tol, "pass": result.passed})
        detail = self.read_prompt(
            "fw.radial.check.md",
            defect=format_number(finite_or_max(result.defect)),
            tol=format_number(result.tol),
        )
        item.update(content=detail)
        if not self.quiet:
            PrintStyle.check(name, result.passed, detail)
        return result

    def note(self, text: str) -> None:
        self.log.log(type="info", content=text)
        if not self.quiet:
            PrintStyle.info(text)

    def run(self, suite: str) -> VerificationReport:
        names = list(SUITES) if suite == "all" else [suite]
        unknown = [n for n in names if n not in self.suites]
        if unknown:
            raise InvalidArgumentError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}, all")
        start = len(self.log.items)
        for name in names:
            grid = SUITE_GRIDS.get(name, DEFAULT_GRID)
            if not self.quiet:
                PrintStyle(bold=True, font_color="#1B4F72", padding=True).print(
                    self.read_prompt("fw.radial.suite_header.md", suite=name, R=format_number(grid.R), N=grid.N)
                )
            began = time.perf_counter()
            self.suites[name]()
            seconds = time.perf_counter() - began
            self.log.log(type="timing", heading=name, kvps={"seconds": seconds})
            if not self.quiet:
                PrintStyle.debug(f"{name} took {seconds:.2f} s")

        checks = [
            CheckResult(item.heading, item.kvps["defect"], item.kvps["tol"])
            for item in self.log.of_type("check")
            if item.no >= start
        ]
        grid = SUITE_GRIDS.get(suite, DEFAULT_GRID)
        report = VerificationReport(suite, checks, grid, self.settings)
        if not self.quiet:
            summary = self.read_prompt(
                "fw.radial.summary.md",
                suite=suite,
                passed=sum(c.passed for c in checks),
                total=len(checks),
            )
            (PrintStyle.success if report.passed else PrintStyle.error)(summary)
            if not report.passed:
                PrintStyle.hint(f"worst check: {report.worst.name}")
        return report

    # --- suites ---

    def suite_involution(self):
        grid = SUITE_GRIDS["involution"]
        model = DstMatrixModel(grid)
        S = model.matrix
        self.check("S*S = I", _max_abs(S @ S, np.eye(grid.N)), 1e-12)

        rng = np.random.default_rng(SEED)
        x = rng.standard_normal(grid.N)
        self.check("dst(dst(x)) = x", _max_abs(model.apply(model.apply(x)), x), 1e-12)

        worst = 0.0
        for _ in range(100):
            a, b = rng.standard_normal(grid.N), rng.standard_normal(grid.N)
            lhs = float(np.dot(model.apply(a), model.apply(b)))
            worst = max(worst, abs(lhs - float(np.dot(a, b))) / (np.linalg.norm(a) * np.linalg.norm(b)))
        self.check("<Sa, Sb> = <a, b>", worst, 1e-10)

        # trapezoid F_s of exp(-t) on the default grid against panel quadrature
        chi = sample(functions.exponential(1.0), DEFAULT_GRID)
        image = continuum_scale(DEFAULT_GRID) * DstMatrixModel(DEFAULT_GRID).apply(chi.values)
        ks = DEFAULT_GRID.momenta
        low = np.nonzero(ks <= 5.0)[0]
        oracle = [fs_quad(functions.exponential(1.0), ks[m], self.settings) for m in low]
        self.check("DST matches F_s exp(-t)", _max_abs(image[low], oracle), 2e-3)

    def suite_hilbert(self):
        s = self.settings
        rs = np.array(SAMPLE_RADII)
        for f in (functions.exponential(1.0), functions.t_gaussian()):
            he = [he_apply(f, r, s) for r in rs]
            ho = [ho_apply(f, r, s) for r in rs]
            self.check(f"H_e = F_s F_c on {f.label}", _max_abs(he, he_via_transforms(f, rs, s)), 1e-5)
            self.check(f"H_o = F_c F_s on {f.label}", _max_abs(ho, ho_via_transforms(f, rs, s)), 1e-5)

        for f in (functions.exponential(1.0), functions.t_exponential(1.0), functions.t_gaussian()):
            self.check(f"H_e H_o = 1 on {f.label}", _max_abs(he_of_ho(f, rs, s), f(rs)), 1e-4)
            self.check(f"H_o H_e = 1 on {f.label}", _max_abs(ho_of_he(f, rs, s), f(rs)), 1e-4)

        si1, ci1 = specfun.sici(1.0)
        self.check("H_e cos at pi/2", abs(he_apply(functions.cosine(1.0), math.pi / 2, s) - 1.0), 1e-5)
        expected = (2.0 / math.pi) * (math.sin(1.0) * ci1 - math.cos(1.0) * si1)
        self.check("H_e sin at 1", abs(he_apply(functions.sine(1.0), 1.0, s) - expected), 1e-5)
        self.check("H_o sin at 2", abs(ho_apply(functions.sine(1.0), 2.0, s) - math.cos(2.0)), 1e-5)

        for f in (functions.exponential(1.0), functions.t_gaussian()):
            worst = max(max(derivative_identity_defect(f, k, s)) for k in (0.5, 1.0, 2.0))
            self.check(f"derivative identities on {f.label}", worst, 1e-6)

    def suite_sqrt(self):
        s = self.settings
        grid = SUITE_GRIDS["sqrt"]
        chi = sample(functions.t_gaussian(), grid)
        second = spectral_second_derivative(chi).values
        self.check("(z+)^2 = -d^2/dr^2 (spectral)", _relative(zplus_discrete(zplus_discrete(chi)).values, -second), 1e-10)

        R = grid.R

        def bump(r):
            return r * (R - r) * np.exp(-r)

        def bump_second(r):
            return (-r * r + (R + 4.0) * r - 2.0 * R - 2.0) * np.exp(-r)

        def fd_error(N):
            g = make_grid(R, N)
            return _max_abs(fd_second_derivative(sample(bump, g)).values, bump_second(g.nodes))

        ratio = fd_error(256) / fd_error(512)
        self.note(f"3-point FD error ratio N=256 -> 512: {format_number(ratio)}")
        self.check("FD second derivative converges at second order", abs(ratio - 4.0), 0.5)

        def spectral_fd_gap(N):
            c = sample(functions.t_gaussian(), make_grid(R, N))
            return _max_abs(fd_second_derivative(c).values, spectral_second_derivative(c).values)

        ratio = spectral_fd_gap(256) / spectral_fd_gap(512)
        self.check("spectral vs FD gap shrinks at second order", abs(ratio - 4.0), 0.5)

        worst = 0.0
        for m in (1, 2, 5):
            k = grid.momenta[m - 1]
            mode = sample(lambda r: np.sin(k * r), grid)
            worst = max(worst, _max_abs(zplus_discrete(mode).values, k * mode.values) / k)
        self.check("sin(k_m r) is a discrete eigenfunction", worst, 1e-10)

        phi = sample(functions.gaussian(), grid)
        self.check("(p+)^2 = p_r^2", _relative(pplus_apply(pplus_apply(phi)).values, pr2_apply(phi).values), 1e-10)

        worst = 0.0
        for k in (1.0, 2.0):
            values = [zplus_quad(functions.sine(k), r, s) for r in SAMPLE_RADII]
            worst = max(worst, _max_abs(values, k * np.sin(k * np.array(SAMPLE_RADII))))
        self.check("z+ sin(kr) = k sin(kr) (quadrature)", worst, 1e-5)

        worst = 0.0
        for k in (1.0, 2.0):
            for r in SAMPLE_RADII:
                si, ci = specfun.sici(k * r)
                expected = -(2.0 * k / math.pi) * (math.sin(k * r) * ci - math.cos(k * r) * si)
                worst = max(worst, abs(zplus_quad(functions.cosine(k), r, s) - expected))
        self.check("z+ cos(kr) Si/Ci form (quadrature)", worst, 1e-5)

        f = functions.t_gaussian()
        direct = [zplus_quad(f, r, s) for r in SAMPLE_RADII]
        self.check("H_e d/dr = F_s k F_s on t*exp(-t^2/2)", _max_abs(direct, zplus_spectral_quad(f, SAMPLE_RADII, s)), 1e-5)

        # cos(R) = 0 here, so only the jump at the origin separates the discrete model from H_e d/dr
        cos_grid = make_grid(12.5 * math.pi, 4095)
        image = zplus_discrete(sample(np.cos, cos_grid)).values
        r = cos_grid.nodes
        window = (r >= 1.0) & (r <= 10.0)
        si, ci = specfun.si_array(r[window]), specfun.ci_array(r[window])
        expected = -(2.0 / math.pi) * (np.sin(r[window]) * ci - np.cos(r[window]) * si) + (2.0 / math.pi) / r[window]
        self.check("discrete z+ cos(r) with origin term", _max_abs(image[window], expected), 1e-2)

    def suite_inverse(self):
        s = self.settings
        grid = SUITE_GRIDS["inverse"]
        chi = sample(functions.t_gaussian(), grid)
        self.check("(z+)^-1 z+ = 1 (discrete)", _relative(zinv_apply(zplus_discrete(chi)).values, chi.values), 1e-10)
        self.check("z+ (z+)^-1 = 1 (discrete)", _relative(zplus_discrete(zinv_apply(chi)).values, chi.values), 1e-10)

        f = functions.exponential(1.0)
        rs = (0.5, 1.0, 2.0)
        kernel = [zinv_quad(f, r, s) for r in rs]
        self.check("log kernel = F_s (1/k) F_s on exp(-t)", _max_abs(kernel, zinv_spectral_quad(f, rs, s)), 1e-5)
        self.check("log kernel = (1/2) r K I on exp(-t)", _max_abs(kernel, [zinv_fractional(f, r, s) for r in rs]), 1e-5)
        sine_values = [zinv_quad(functions.sine(1.0), r, s) for r in rs]
        self.check("log kernel on sin(t)", _max_abs(sine_values, np.sin(rs)), 1e-3)

    def suite_fracint(self):
        s = self.settings
        rs = np.linspace(0.2, 10.0, 50)
        for k in (0.5, 1.0, 2.0):
            self.check(f"I sin({format_number(k)}t) = sqrt(pi) J1", i_sine_defect(k, rs, s), 1e-8)
        self.check("I 1 = 2/sqrt(pi)", abs(ek_i_apply(functions.step(0.0), 1.0, s) - TWO_OVER_SQRT_PI), 1e-10)
        # K_0(1) = 0.42102443824070834
        self.check("K exp(-t) at 1", abs(ek_k_apply(functions.exponential(1.0), 1.0, s) - TWO_OVER_SQRT_PI * 0.42102443824070834), 1e-8)
        self.check(
            "K step[0,2) at 1",
            abs(ek_k_apply(functions.step(0.0, 2.0), 1.0, s) - TWO_OVER_SQRT_PI * math.acosh(2.0)),
            1e-8,
        )

        for psi, chi in (
            (functions.exponential(1.0), functions.exponential(1.0)),
            (functions.t_gaussian(), functions.exponential(1.0)),
        ):
            self.check(f"(rK)^T = rI on {psi.label}, {chi.label}", adjoint_defect(psi, chi, 40.0, s), 1e-5)

        self.check("K H_e f = r I(f/t) on t*exp(-t^2/2)", rooney_defect(functions.t_gaussian(), 1.0, s), 1e-4)
        self.check("K H_e f = r I(f/t) on t*exp(-t)", rooney_defect(functions.t_exponential(1.0), 2.0, s), 1e-4)
        self.check("K H_e f = r I(f/t) on cos(t), Mehler-Sonine", rooney_defect(functions.cosine(1.0), 1.0, s), 1e-4)

        self.check("J1 finite-interval orthogonality", bessel_orthogonality_defect(1.0, 4, s), 1e-6)
        grid = SUITE_GRIDS["fracint"]
        modes = np.sin(np.outer(grid.momenta, grid.nodes))
        gram = (2.0 / (grid.N + 1)) * modes @ modes.T
        self.check("discrete sine modes orthonormal", _max_abs(gram, np.eye(grid.N)), 1e-10)

    def suite_positivity(self):
        grid = SUITE_GRIDS["positivity"]
        Z = build_matrix(OperatorSpec(OperatorKind.ZPLUS), grid)
        self.check("min eigenvalue of z+ is pi/R", abs(min_eigenvalue(Z) - math.pi / grid.R), 1e-8)

        model = DstMatrixModel(grid)
        rng = np.random.default_rng(SEED)
        lowest, worst = math.inf, 0.0
        for _ in range(100):
            chi = SampledFunction(grid, rng.standard_normal(grid.N))
            q = quadratic_form(Z, chi)
            factorized = grid.spacing * float(np.sum(grid.momenta * model.apply(chi.values) ** 2))
            lowest = min(lowest, q)
            worst = max(worst, abs(q - factorized) / factorized)
        self.check("quadratic forms are non-negative", max(0.0, -lowest), 0.0)
        self.check("quadratic form = |sqrt(k) S chi|^2", worst, 1e-10)

        scale = float(np.max(np.abs(Z.entries)))
        self.check("z+ matrix symmetric", symmetry_defect(Z) / scale, 1e-12)
        P = build_matrix(OperatorSpec(OperatorKind.PR2), grid)
        self.check("p_r^2 symmetric in the flat measure", symmetry_defect(P) / float(np.max(np.abs(P.flat))), 1e-10)
        self.note(
            self.read_prompt("fw.radial.commutator.md", op=Z.name, value=format_number(commutator_norm(Z)))
        )

    def suite_nonhermitian(self):
        cases = (
            (functions.step(0.0, 1.0), 0.5, make_grid(2.0, 4095)),
            (functions.exponential(1.0), 1.0, SUITE_GRIDS["nonhermitian"]),
        )
        for f, a, grid in cases:
            report = shift_demo(sample(f, grid), a, f)
            self.note(self.shift_text(report, f.label))
            self.check(f"shift by {format_number(a)} loses the overlap of {f.label}", abs(report.measured_loss - report.analytic_loss), 1e-3)

        decaying = deficiency_check(1)
        growing = deficiency_check(-1)
        for report in (decaying, growing):
            self.note(self.deficiency_text(report))
            self.check(f"deficiency residual, sign {report.sign:+d}", report.residual, 1e-10)
        self.check(
            "deficiency +1 normalizable",
            abs(decaying.norm_sq_doubled - decaying.norm_sq) / decaying.norm_sq_doubled,
            1e-6,
        )
        self.check("deficiency -1 not normalizable", growing.norm_sq / growing.norm_sq_doubled, 1e-6)
        control = deficiency_check(1, candidate=functions.exponential(1.1))
        self.check("negative control exp(-1.1r) residual", abs(control.residual - 0.1), 1e-10)

        D = build_matrix(OperatorSpec(OperatorKind.DTILDE_FD, Realization.FINITE_DIFFERENCE), SUITE_GRIDS["sqrt"])
        flat = D.flat
        self.check("flat D~ antisymmetric (spuriously)", _max_abs(flat, -flat.T) / float(np.max(np.abs(flat))), 1e-12)

    def suite_specfun(self):
        self.check("Si(pi)", abs(specfun.si(math.pi) - 1.8519370519824662), 1e-7)
        self.check("Ci(1)", abs(specfun.ci(1.0) - 0.33740392290096813), 1e-7)
        self.check("J1(1)", abs(specfun.j1(1.0) - 0.44005058574493355), 1e-7)
        self.check("first zero of J1", abs(specfun.j1_zero(1) - 3.8317059702075123), 1e-7)

    # --- demo text ---

    def shift_text(self, report, label: str) -> str:
        return self.read_prompt(
            "fw.radial.shift.md",
            fn=label,
            a=format_number(report.a),
            steps=report.shift_nodes,
            before=format_number(report.norm_before),
            after=format_number(report.norm_after),
            measured=format_number(report.measured_loss),
            analytic=format_number(report.analytic_loss),
        )

    def deficiency_text(self, report) -> str:
        return self.read_prompt(
            "fw.radial.deficiency.md",
            sign=f"{report.sign:+d}",
            candidate=report.candidate,
            residual=format_number(report.residual),
            R=format_number(report.R_check),
            norm=format_number(report.norm_sq),
            doubled=format_number(report.norm_sq_doubled),
            finite="finite" if report.norm_finite else "growing",
        )
