"""Atom diffraction by an optical standing wave: adiabatic and resonant regimes."""
from .adiabatic import (
    AdiabaticParams,
    PulseParams,
    ValidityReport,
    asymmetry,
    asymmetry_closed_form,
    diffract,
    interaction_parameter,
    mean_momentum,
    mean_momentum_closed_form,
    pulse_area,
    raman_nath_check,
    two_peak_diffract,
)
from .errors import InvalidArgumentError, NumericalQualityError, RegimeError, StepSizeError, TruncationError
from .gaussian_dynamics import airy_solution, dde_residual, gaussian_diffract, i_exact, moving_gaussian
from .ladder_oracle import LadderState, adiabatic_validate, evolve, resonant_validate
from .pattern import DiffractionPattern
from .resonant import fringe_balance, gaussian_resonant_closed_form, resonant_diffract
from .specfun import airy_ai, bessel_j, bessel_j_array
from .wavepacket import GaussianSpec, WavePacket, make_gaussian, make_two_peak, to_resonant_vector

__version__ = "0.1.0"
