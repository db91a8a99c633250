"""Field cellular-automaton decoders for the toric code.

An auxiliary lattice of cells carries a real-valued field that is repeatedly
smoothed and sourced by the code's excitations; the emerging Coulomb-like
potential steers excitations toward each other so that purely local hop rules
remove them.  The package bundles the 2D / ramped-2D / 3D automaton decoders,
idealized power-law reference decoders, the spectral analysis of the field
dynamics, and a reproducible Monte Carlo benchmark harness with a CLI.
"""

from .automaton import (
    ConstantVelocity,
    DecodeOutcome,
    DecoderConfig,
    LogSquaredVelocity,
    RampVelocity,
    Status,
    anyon_update,
    decode,
    decoder_2d,
    decoder_2dstar,
    decoder_3d,
    field_update,
    resolve_velocity,
)
from .bench import (
    BenchPoint,
    BenchRecord,
    estimate_crossing,
    run_grid,
    run_point,
    wilson_interval,
)
from .ideal import ideal_decode, ideal_field, potential, repetition_decode
from .lattice import TorusLattice
from .spectral import (
    SpectralModel,
    critical_velocity,
    rescale,
    self_interaction_chi,
    self_interaction_chi_prime,
    self_interaction_time,
)
from .toric import (
    ErrorConfig,
    flip_edge,
    logical_failure,
    sample_iid_noise,
    syndrome,
)

__version__ = "0.1.0"

__all__ = [
    "BenchPoint",
    "BenchRecord",
    "ConstantVelocity",
    "DecodeOutcome",
    "DecoderConfig",
    "ErrorConfig",
    "LogSquaredVelocity",
    "RampVelocity",
    "SpectralModel",
    "Status",
    "TorusLattice",
    "anyon_update",
    "critical_velocity",
    "decode",
    "decoder_2d",
    "decoder_2dstar",
    "decoder_3d",
    "estimate_crossing",
    "field_update",
    "flip_edge",
    "ideal_decode",
    "ideal_field",
    "logical_failure",
    "potential",
    "repetition_decode",
    "rescale",
    "resolve_velocity",
    "run_grid",
    "run_point",
    "sample_iid_noise",
    "self_interaction_chi",
    "self_interaction_chi_prime",
    "self_interaction_time",
    "syndrome",
    "wilson_interval",
]
