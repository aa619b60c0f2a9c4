"""Parameter sets of the published figures, with the values printed for them.

All four use ``k = 1``, ``h0 = 1``, ``g = 9.8``, ``epsilon = 0.1``,
``alpha = 0``, the orbit constant ``beta = 1`` and the background constant
chosen so that ``C = c``.
"""

from __future__ import annotations

import copy

from .errors import ValidationError

_BASE = {
    "g": 9.8,
    "h0": 1.0,
    "k": 1.0,
    "epsilon": 0.1,
    "alpha": 0.0,
    "linearization": "shear",
    "beta": 1.0,
    "t_end": 10.0,
    "n_samples": 1000,
    "method": "auto",
}

PRESETS = {
    "fig3": {**_BASE, "omega0": 2.0, "root_sign": "+"},
    "fig4": {**_BASE, "omega0": 20.0, "root_sign": "-"},
    "fig5": {**_BASE, "omega0": 2.0, "root_sign": "-"},
    "neg20": {**_BASE, "omega0": -20.0, "root_sign": "+"},
}

# (value, tolerance, "rel" | "abs")
PRINTED = {
    "fig3": {"c": (4.07454, 1e-4, "rel"), "A": (0.176526, 1e-4, "rel"), "B": (2.0, 1e-4, "rel")},
    "fig4": {"c": (4.29294, 1e-4, "rel"), "A": (-1.33654, 1e-4, "rel"), "B": (20.0, 1e-4, "rel")},
    "fig5": {"c": (-1.59773, 1e-4, "rel"), "A": (-0.306137, 1e-4, "rel"), "B": (2.0, 1e-4, "rel")},
    "neg20": {
        "c": (-4.29294, 1e-4, "rel"),
        "A": (1.33654, 1e-4, "rel"),
        "B": (-20.0, 1e-4, "rel"),
        "Z0": (0.000798, 5e-6, "abs"),
        "p": (9.55422, 1e-4, "rel"),
        "q": (24.8588, 1e-4, "rel"),
        "threshold": (0.99968, 1e-5, "abs"),
    },
}

# root structure stated for each set
PRINTED_CASE = {
    "fig3": "ThreeReal",
    "fig4": "ThreeReal",
    "fig5": "ThreeReal",
    "neg20": "HyperellipticOnly",
}

FIGURE_PRESETS = ("fig3", "fig4", "fig5")


def preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
