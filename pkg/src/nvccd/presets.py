"""Figure presets: fully resolved parameter sets for the standard scenarios.

Each preset is a plain config dict (the CLI schema) so a preset run, its
manifest, and a hand-written config file are interchangeable.  Comparison
presets carry a ``configurations`` list of labelled overrides applied on
top of the base sections.
"""

from __future__ import annotations

import copy

_SLOW_DRIVE = {
    # symmetric low-frequency set used by the population and damping studies
    "order": "first",
    "omega_plus": 0.15, "omega_minus": 0.15,
    "amp1_plus": 0.9, "amp1_minus": 0.9,
    "amp2_plus": 0.45, "amp2_minus": 0.45,
    "amp3_plus": 0.225, "amp3_minus": 0.225,
    "constant_value": None,
}

_ASYM_DRIVE = {
    # asymmetric-branch set used by the purity/entropy comparison studies
    "order": "first",
    "omega_plus": 1.0, "omega_minus": 0.35,
    "amp1_plus": 1.0, "amp1_minus": 0.8,
    "amp2_plus": 0.5, "amp2_minus": 0.4,
    "amp3_plus": 0.25, "amp3_minus": 0.2,
    "constant_value": None,
}


def _fig2() -> dict:
    return {
        "mode": "evolve", "figure": "fig2", "backend": "block",
        "run": {"t_max": 50.0, "dt": 0.001, "sample_every": 100, "master_seed": 12345},
        "hamiltonian": {"delta_plus": -1.0},
        "drive": dict(_SLOW_DRIVE),
        "initial_level": 1,
        "configurations": [
            {"label": "constant", "drive": {"order": "constant"}},
            {"label": "order-1", "drive": {"order": "first"}},
            {"label": "order-2", "drive": {"order": "second"}},
        ],
    }


def _fig3() -> dict:
    cfg = _fig2()
    cfg["figure"] = "fig3"
    cfg["run"]["t_max"] = 200.0
    cfg["configurations"] = [
        {"label": "order-1", "drive": {"order": "first"}},
        {"label": "order-2", "drive": {"order": "second"}},
    ]
    return cfg


def _fig4() -> dict:
    return {
        "mode": "lindblad", "figure": "fig4", "backend": "block",
        "run": {"t_max": 10.0, "dt": 0.001, "sample_every": 100, "master_seed": 12345},
        "hamiltonian": {"delta_plus": 0.9},
        "drive": dict(_ASYM_DRIVE),
        "lindblad": {"gamma": 0.05},
        "initial_level": 1,
        "configurations": [
            {"label": "no-drive", "drive": {"order": "constant", "constant_value": 0.0}},
            {"label": "constant", "drive": {"order": "constant"}},
            {"label": "order-1", "drive": {"order": "first"}},
            {"label": "order-2", "drive": {"order": "second"}},
            {"label": "order-3", "drive": {"order": "third"}},
        ],
    }


def _fig5() -> dict:
    return {
        "mode": "lindblad", "figure": "fig5", "backend": "block",
        "run": {"t_max": 20.0, "dt": 0.001, "sample_every": 100, "master_seed": 12345},
        "hamiltonian": {"delta_plus": -1.0},
        "drive": dict(_SLOW_DRIVE, order="second"),
        "lindblad": {"gamma": 0.05},
        "initial_level": 1,
        "configurations": [
            {"label": "gamma-0.05", "lindblad": {"gamma": 0.05}},
            {"label": "gamma-0.1", "lindblad": {"gamma": 0.1}},
            {"label": "gamma-0.5", "lindblad": {"gamma": 0.5}},
        ],
    }


def _fig6() -> dict:
    # entropy companion of the purity comparison: identical computation,
    # the entropy column of the same CSV is what gets plotted
    cfg = _fig4()
    cfg["figure"] = "fig6"
    return cfg


def _fig7() -> dict:
    return {
        "mode": "ensemble", "figure": "fig7", "backend": "block",
        "run": {"t_max": 20.0, "dt": 0.001, "sample_every": 100, "master_seed": 777},
        "hamiltonian": {"delta_plus": 0.9},
        "drive": dict(_ASYM_DRIVE),
        "lindblad": {"gamma": 0.05},
        # bath tau chosen so the intensity sweep visibly lowers purity over
        # the run (a quasistatic bath is decoupled almost perfectly and
        # leaves the sweep flat); see the noise-module docs
        "noise": {"bath_intensity": 0.25, "bath_tau": 2.0,
                  "mw_intensity": 0.001, "mw_tau": 25.0},
        "ensemble": {"n_realizations": 1000, "average_rho_first": False,
                     "keep_traces": False},
        "initial_level": 1,
        "configurations": [
            {"label": "constant", "drive": {"order": "constant"}},
            {"label": "order-1", "drive": {"order": "first"}},
            {"label": "order-2", "drive": {"order": "second"}},
            {"label": "order-2-bath-0.05", "drive": {"order": "second"},
             "noise": {"bath_intensity": 0.05}},
            {"label": "order-2-bath-0.25", "drive": {"order": "second"},
             "noise": {"bath_intensity": 0.25}},
            {"label": "order-2-bath-0.5", "drive": {"order": "second"},
             "noise": {"bath_intensity": 0.5}},
        ],
    }


def _fig8() -> dict:
    # entropy companion of the noisy-ensemble comparison (same CSV columns)
    cfg = _fig7()
    cfg["figure"] = "fig8"
    return cfg


_BUILDERS = {
    "fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5,
    "fig6": _fig6, "fig7": _fig7, "fig8": _fig8,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def preset(name: str) -> dict:
    """Deep copy of the named preset config."""
    key = name.strip().lower()
    if key not in _BUILDERS:
        raise KeyError(f"unknown figure preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    return copy.deepcopy(_BUILDERS[key]())
