"""Four-directional 5x5 Sobel edge detection with a streaming, row-reusing engine."""

from .errors import SobelError
from .filters import DEFAULT_PARAMS, Direction, FilterParams, make_kd_sum_diff, materialize, validate_params
from .oracle import conv2d_valid, diag_via_sum_diff, sobel3_2d, sobel5_4d
from .pipeline import plan_strips, run_stream, run_stream_3x3

__version__ = "0.1.0"
