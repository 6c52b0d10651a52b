"""
Cross-oracle verification suites.

Each suite compares two independent routes to the same quantity and
returns a SuiteResult with the measured error and the tolerance used.
"""

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .dicke import chi31_dicke, gamma_hom
from .kinetic_mc import McConfig, averaging_window, simulate_chi_grid
from .params import BeamParams, MediumParams
from .presets import (FIG7_A, FIG7_PARAMS, MC_BEAMS, MC_DELTAS, MC_K, MC_MEDIUM, PROBE_Q1)
from .ramsey import RamseyGeometry, fd_oracle, s_correction
from .susceptibility import chi31_general
from .velocity import one_photon_K

MC_DEFAULT = McConfig(n_atoms=100_000, dt=0.035, t_total=60.0, seed=20_160_415)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    metric: str
    measured: float
    tolerance: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def dicke_draw(rng):
    """One random parameter set inside the diffusion-limit validity region."""
    v = rng.uniform(100.0, 300.0)
    k = 10 ** rng.uniform(0.0, 3.5)
    dq = rng.choice([0.0, 1.0]) * 10 ** rng.uniform(0.0, 3.0)
    dq_vec = (0.0, 0.0, dq) if rng.random() < 0.5 else (dq, 0.0, 0.0)
    b = float(np.linalg.norm(np.array(dq_vec) + np.array([k, 0.0, 0.0])))
    gamma = max(10 ** rng.uniform(2.0, 3.5) * v * b, 1e5)
    medium = MediumParams(v_th=v, gamma=gamma, Gamma_d=10 ** rng.uniform(7, 9),
                          Gamma_21=10 ** rng.uniform(2, 4))
    K = one_photon_K(0.0, medium, PROBE_Q1).real
    power = rng.uniform(0.1, 3.0) * medium.Gamma_21 / K
    beams = BeamParams(q1=PROBE_Q1, delta_q=dq_vec, Omega_2=np.sqrt(power))
    return k, medium, beams, b


def dicke_relative_error(k, medium, beams, b, n_delta=21):
    """Max |chi_general - chi_dicke| / |chi_dicke| over +-5 linewidths."""
    width = gamma_hom(medium, beams) + medium.D * b * b
    deltas = np.linspace(-5.0, 5.0, n_delta) * width
    general = chi31_general(k, 0.0, medium, beams, delta=deltas)
    dicke = np.array([chi31_dicke(k, 0.0, medium, beams.with_(Delta=d)) for d in deltas])
    return float(np.max(np.abs(general - dicke) / np.abs(dicke)))


def suite_general_dicke(tol=0.05, draws=50, seed=7):
    rng = np.random.default_rng(seed)
    errs = [dicke_relative_error(*dicke_draw(rng)) for _ in range(draws)]
    worst = max(errs)
    return SuiteResult("general-dicke", worst <= tol, "max relative |chi_general - chi_dicke|",
                       worst, tol, details={"draws": draws})


def ramsey_errors(dim, deltas=None):
    deltas = np.linspace(-1e4, 1e4, 101) if deltas is None else deltas
    geom = RamseyGeometry(FIG7_A, dim)
    analytic = s_correction(deltas, geom, FIG7_PARAMS)
    fd = np.array([fd_oracle(d, geom, FIG7_PARAMS) for d in deltas])
    return np.abs(fd - analytic) / np.abs(analytic)


def suite_ramsey_fd(tol=1e-4):
    worst = {dim: float(ramsey_errors(dim).max()) for dim in ("sheet", "cylinder")}
    measured = max(worst.values())
    return SuiteResult("ramsey-fd", measured <= tol, "max relative |S_D analytic - S_D finite-difference|",
                       measured, tol, details=worst)


def suite_mc_general(sigmas=3.0, cfg=None, medium=MC_MEDIUM, beams=MC_BEAMS, k=MC_K,
                     deltas=MC_DELTAS):
    cfg = MC_DEFAULT if cfg is None else cfg
    res = simulate_chi_grid(deltas, k, 0.0, medium, beams, cfg)
    ref = chi31_general(k, 0.0, medium, beams, delta=np.asarray(deltas, dtype=float))
    nsig = np.abs(res.chi - ref) / res.stderr
    worst = float(nsig.max())
    details = {
        "deltas": list(map(float, deltas)),
        "n_sigma": nsig.tolist(),
        "stderr": res.stderr.tolist(),
        "chi_mc_re": res.chi.real.tolist(),
        "chi_mc_im": res.chi.imag.tolist(),
        "chi_general_re": ref.real.tolist(),
        "chi_general_im": ref.imag.tolist(),
        "n_atoms": cfg.n_atoms,
        "window": averaging_window(medium, beams),
    }
    return SuiteResult("mc-general", worst <= sigmas, "max |chi_mc - chi_general| / stderr",
                       worst, sigmas, details=details)


SUITES = {
    "general-dicke": "general susceptibility vs diffusion-limit formula (50 random draws)",
    "ramsey-fd": "finite-beam closed forms vs finite-difference solutions (sheet, cylinder)",
    "mc-general": "kinetic Monte-Carlo vs general susceptibility at eta = 1.6",
}


def run_suites(names=None, settings=None, mc_cfg=None, mc_setup=None):
    """Run the named suites (all by default) and return their results."""
    names = list(SUITES) if not names else list(names)
    s = settings
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(name)
        t0 = time.perf_counter()
        if name == "general-dicke":
            r = suite_general_dicke(s.dicke_rel_tol if s else 0.05, s.dicke_draws if s else 50)
        elif name == "ramsey-fd":
            r = suite_ramsey_fd(s.ramsey_rel_tol if s else 1e-4)
        else:
            r = suite_mc_general(s.mc_sigmas if s else 3.0, mc_cfg, **(mc_setup or {}))
        r.seconds = time.perf_counter() - t0
        out.append(r)
    return out
