"""Frozen parameter sets reproducing each figure's data.

Every preset is a :class:`RunConfig` plus the name of the command that
produces its data. Potential and alpha values are fixed literals;
energy windows and grid sizes are choices of this package.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import RunConfig


@dataclass(frozen=True)
class FigurePreset:
    preset_id: str
    command: str
    config: RunConfig
    description: str


_SS_BARRIER = dict(potential="barrier", V1=9.1675, V2=-10.0, b=10.0, v=1e-5)
_CPA_BARRIER = dict(potential="barrier", V1=0.1, V2=5.0, b=10.0, v=1e-5)
_FIG_ALPHAS = (2.0, 1.99, 1.98, 1.95)

PRESETS: dict[str, FigurePreset] = {
    p.preset_id: p
    for p in [
        FigurePreset(
            "fig1", "delta-ss",
            RunConfig(potential="delta", rho=1.5, v=1e-5, alphas=(2.0, 1.9, 1.85), format="csv"),
            "delta -1.5i: SS energies, blue shift",
        ),
        FigurePreset(
            "fig2", "delta-ss",
            RunConfig(potential="delta", rho=1e-5, v=1e-5, alphas=(2.0, 1.9, 1.85), format="csv"),
            "delta -1e-5 i: SS energies, red shift",
        ),
        FigurePreset(
            "fig3", "scan",
            RunConfig(**_SS_BARRIER, alphas=_FIG_ALPHAS, e_min=100.0, e_max=600.0, e_points=4000, format="csv"),
            "SS barrier: R, T against E at four alphas",
        ),
        FigurePreset(
            "fig4", "track",
            RunConfig(**_SS_BARRIER, kind="SS", alpha_min=1.98, alpha_max=2.0, alpha_points=200,
                      e_min=200.0, e_max=400.0, e_points=4000, format="json"),
            "SS barrier: sub-peak development over 1.98 <= alpha <= 2",
        ),
        FigurePreset(
            "fig5", "scan",
            RunConfig(**_SS_BARRIER, alpha_min=1.996, alpha_max=2.0, alpha_points=200,
                      e_min=265.0, e_max=285.0, e_points=400, format="csv"),
            "SS barrier: close view of the first sub-peak",
        ),
        FigurePreset(
            "fig6", "profile",
            RunConfig(**_SS_BARRIER, energies=(280.0,), alpha_min=1.98, alpha_max=2.0, alpha_points=2000,
                      format="csv"),
            "SS barrier: alpha cut at E = 280",
        ),
        FigurePreset(
            "fig7", "scan",
            RunConfig(**_CPA_BARRIER, alphas=_FIG_ALPHAS, e_min=40.0, e_max=200.0, e_points=4000, format="csv"),
            "CPA barrier: |C| against E at four alphas",
        ),
        FigurePreset(
            "fig8", "track",
            RunConfig(**_CPA_BARRIER, kind="CPA", alpha_min=1.992, alpha_max=2.0, alpha_points=200,
                      e_min=60.0, e_max=150.0, e_points=4000, format="json"),
            "CPA barrier: development over 1.992 <= alpha <= 2",
        ),
        FigurePreset(
            "fig9", "track",
            RunConfig(**_CPA_BARRIER, kind="CPA", alpha_min=1.97, alpha_max=2.0, alpha_points=200,
                      e_min=60.0, e_max=150.0, e_points=4000, format="json"),
            "CPA barrier: development over 1.97 <= alpha <= 2",
        ),
        FigurePreset(
            "fig10", "profile",
            RunConfig(**_CPA_BARRIER, energies=(50.0, 100.0, 200.0, 400.0, 600.0, 800.0, 1500.0, 2000.0),
                      alpha_min=1.7, alpha_max=2.0, alpha_points=2000, format="csv"),
            "CPA barrier: alpha cuts of |C| at eight energies",
        ),
    ]
}


def get_preset(preset_id: str) -> FigurePreset:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise KeyError(f"unknown preset {preset_id!r}; choose from {', '.join(PRESETS)}") from None
