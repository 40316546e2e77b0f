"""Twin composite pi-pulse sequences: construction, exact profiles and checks."""

from twinpulse.robustness import (
    GridSpec,
    OrderEstimate,
    ProfileTable,
    analytic_probability,
    bandwidth,
    compare,
    estimate_order,
    profile,
    sequence_propagator,
)
from twinpulse.sequences import (
    CompositeSequence,
    Family,
    Pulse,
    build_twin,
    phases_type1,
    phases_type23,
    reference_sequence,
    single_pulse,
    total_area,
)
from twinpulse.su2 import (
    A,
    B,
    C,
    D,
    IDENTITY,
    PulseArea,
    Su2Matrix,
    compose,
    equivalent_up_to_global_phase,
    phase_shift,
    resonant_propagator,
    transition_probability,
)

__version__ = "0.1.0"
