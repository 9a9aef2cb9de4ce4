"""Fidelity functionals for ZZ gates, mediated gates and echo sequences."""
from .choi import (  # noqa
    TwoQubitChannel,
    channel_from_map,
    choi_fidelity,
    identity_channel,
    kraus_channel,
    unitary_channel,
    zz_damping_channel,
    zz_rotation,
)
from .damping import TARGET_ANGLE, as_gate_time, mediated_fidelity, zz_damping_fidelity  # noqa
from .echo import (  # noqa
    EchoSpec,
    echo_residual,
    flip_schedule_propagator,
    fractional_flip_schedule,
)
from .mediation import mediated_kraus, mediated_sequence_channel  # noqa
