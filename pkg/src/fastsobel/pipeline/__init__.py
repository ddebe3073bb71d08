from .counters import OpCounters
from .engine import StreamResult, StreamResult3, run_stream, run_stream_3x3, schedule3, schedule5
from .ring import KdPlusBank, RowRing
from .rows import (
    K0,
    K1,
    StreamTaps,
    hpass_d,
    hpass_f,
    hpass_h,
    hpass_kd,
    recover_diag,
    stream_taps,
    vagg_gd_minus,
    vagg_gd_plus,
    vagg_gx,
    vagg_gy,
)
from .tiling import DEFAULT_LANES, Strip, StripPlan, plan_strips
