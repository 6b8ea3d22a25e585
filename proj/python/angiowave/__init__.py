from ._core import (
    ModelParams,
    census,
    classify_point,
    curve_c1,
    curve_c2,
    curve_c3,
    fold_factor,
    hole_roots,
    measure_seeded_speed,
    shock_wave,
    smooth_wave,
    sr_jump_wave,
    wall_F,
    wall_u_zero,
)

__all__ = [
    "ModelParams",
    "census",
    "classify_point",
    "curve_c1",
    "curve_c2",
    "curve_c3",
    "fold_factor",
    "hole_roots",
    "measure_seeded_speed",
    "shock_wave",
    "smooth_wave",
    "sr_jump_wave",
    "wall_F",
    "wall_u_zero",
]
