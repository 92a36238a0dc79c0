"""Delay Doppler transform toolkit."""

__version__ = "0.1.0"

from .signals import (  # noqa: E402
    S1,
    S2,
    S3,
    ComplexSignal,
    Constant,
    CubicChirp,
    FromFile,
    Gaussian,
    GaussianPulse,
    LinearChirp,
    LinearRate,
    Rectangular,
    Sum,
    TabulatedLaw,
    TabulatedWindow,
    TimeGrid,
    Tone,
    UniformGrid,
    UnitImpulse,
    eval_doppler,
    eval_window,
    make_grid,
    synthesize,
)
from .transforms import (  # noqa: E402
    DeconvOptions,
    DegenerateWindowError,
    TFMap,
    convolve,
    ddt_constant,
    ddt_general,
    ddt_map,
    inverse_ddt,
    map_distance,
    stft_map,
    verify_shift_identity,
)
from .channel import (  # noqa: E402
    ContinuousChannel,
    NoiseSpec,
    PulseTrainSpec,
    Tap,
    TapChannel,
    apply_channel,
    ddt_pulse_train_sum,
    ddt_receive_model,
    dechirp,
    pulse_train,
    received_pulse_train_model,
    verify_channel_identity,
)
