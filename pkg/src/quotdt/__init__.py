"""Motivic and enumerative Donaldson-Thomas generating functions of Quot schemes of points."""
from .motive import (
    LEF,
    ONE,
    U,
    ZERO,
    HodgeWeight,
    TateClass,
    WeightPolynomial,
    euler_char,
    is_effective,
    lefschetz,
    projective_class,
    weight_specialize,
)
from .series import (
    MotiveSeries,
    config_class,
    exp_series,
    log_series,
    power,
    sigma,
    substitute,
)
from .dt import (
    ThreefoldInput,
    chern_exponent,
    dt_series,
    macmahon,
    omega,
    p_punctual,
    vc_weight_series,
    z_affine,
    z_threefold,
)

__version__ = "0.1.0"
