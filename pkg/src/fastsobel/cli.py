"""Command-line interface: ``fastsobel {detect,verify,bench,kernels}``.

Exit codes: 0 success, 1 verification failure, 2 usage, config or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import imageio, metrics, oracle
from .errors import SobelError
from .filters import (
    Direction,
    FilterParams,
    decompose_kd_minus,
    make_kd_sum_diff,
    materialize,
    validate_params,
)
from .pipeline import run_stream, run_stream_3x3
from .pipeline.engine import DEFAULT_BLOCK_ROWS
from .synth import parse_size, random_image

OPERATORS = ("sobel5_4d", "sobel3_2d")
BACKENDS = ("oracle", "fast")
SSIM_THRESHOLD = 0.99


class ConfigError(SobelError):
    pass


def _on_off(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"expected on/off, got {text!r}")


def _choice(options):
    def parse(text):
        if text not in options:
            raise ConfigError(f"expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


def _positive_int(text) -> int:
    value = int(text)
    if value < 1:
        raise ConfigError(f"expected a positive integer, got {text!r}")
    return value


def _sizes(text) -> tuple[int, ...]:
    if isinstance(text, tuple):
        return text
    return tuple(_positive_int(s) for s in str(text).split(",") if s.strip())


@dataclass(frozen=True)
class RunConfig:
    operator: str = "sobel5_4d"
    backend: str = "fast"
    a: int = 1
    b: Fraction = Fraction(2)
    m: Fraction = Fraction(6)
    n: Fraction = Fraction(4)
    prefetch: bool = True
    lanes: int = 32
    block_rows: int = DEFAULT_BLOCK_ROWS
    pad: str = "replicate"
    workers: int = 1
    mode: str = "normalize"
    seed: int = 0
    iters: int = 100
    sizes: tuple[int, ...] = (512, 1024, 2048)

    @property
    def params(self) -> FilterParams:
        return FilterParams(self.a, self.b, self.m, self.n)

    @property
    def radius(self) -> int:
        return 2 if self.operator == "sobel5_4d" else 1


PARSERS = {
    "operator": _choice(OPERATORS),
    "backend": _choice(BACKENDS),
    "a": int,
    "b": Fraction,
    "m": Fraction,
    "n": Fraction,
    "prefetch": _on_off,
    "lanes": _positive_int,
    "block_rows": int,
    "pad": _choice(("none", "replicate")),
    "workers": _positive_int,
    "mode": _choice(("normalize", "clamp_abs")),
    "seed": int,
    "iters": _positive_int,
    "sizes": _sizes,
}


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by the config file, overridden by flags."""
    raw = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in PARSERS:
        flag = getattr(args, key, None)
        if flag is not None:
            raw[key] = flag
    try:
        parsed = {k: PARSERS[k](v) for k, v in raw.items()}
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    cfg = replace(RunConfig(), **parsed)
    if cfg.lanes <= 2 * cfg.radius:
        raise ConfigError(f"--lanes must exceed {2 * cfg.radius} for {cfg.operator}")
    validate_params(cfg.params)
    return cfg


def compute(img: np.ndarray, cfg: RunConfig, backend: str | None = None):
    """Run the configured operator; returns (named planes, counters or None)."""
    backend = backend or cfg.backend
    if cfg.operator == "sobel3_2d":
        if backend == "oracle":
            res = oracle.sobel3_2d(img)
            return res._asdict(), None
        res = run_stream_3x3(img, prefetch=cfg.prefetch, lanes=cfg.lanes,
                             workers=cfg.workers, block_rows=cfg.block_rows or None)
        return {"gx": res.gx, "gy": res.gy, "g": res.g}, res.counters
    if backend == "oracle":
        return oracle.sobel5_4d(img, cfg.params)._asdict(), None
    res = run_stream(img, cfg.params, prefetch=cfg.prefetch, lanes=cfg.lanes,
                     workers=cfg.workers, block_rows=cfg.block_rows or None)
    planes = {"gx": res.gx, "gy": res.gy, "gd": res.gd, "gdt": res.gdt, "g": res.g}
    return planes, res.counters


def _check_size(img, cfg):
    need = 2 * cfg.radius + 1
    if min(img.shape) < need and cfg.pad == "none":
        raise ConfigError(f"image {img.shape[1]}x{img.shape[0]} is smaller than {need}x{need}")


def cmd_detect(cfg: RunConfig, args) -> int:
    img = imageio.load_gray(args.input)
    if cfg.pad == "replicate":
        img = imageio.pad_replicate(img, cfg.radius).plane
    _check_size(img, cfg)
    planes, counters = compute(img, cfg)
    imageio.save_plane(planes["g"], args.output, cfg.mode)
    if args.dump_planes:
        dump = Path(args.dump_planes)
        dump.mkdir(parents=True, exist_ok=True)
        for name, plane in planes.items():
            if name != "g":
                imageio.save_plane(plane, dump / f"{name}.png", "clamp_abs")
    h, w = planes["g"].shape
    print(f"wrote {args.output} ({w}x{h}, {cfg.operator}, backend={cfg.backend})")
    if counters is not None:
        print("counters: " + json.dumps(counters.as_dict(), sort_keys=True))
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    if args.random:
        w, h = parse_size(args.random)
        img = random_image(w, h, cfg.seed)
        source = f"random {w}x{h} seed={cfg.seed}"
    elif args.input:
        img = imageio.load_gray(args.input)
        source = str(args.input)
    else:
        raise ConfigError("verify needs an input file or --random WxH")
    if cfg.pad == "replicate" and args.input:
        img = imageio.pad_replicate(img, cfg.radius).plane
    _check_size(img, cfg)
    ref, _ = compute(img, cfg, "oracle")
    fast, _ = compute(img, cfg, "fast")
    print(f"source: {source}; operator {cfg.operator}; params {cfg.params}")
    exact = True
    for name in ref:
        if name == "g":
            continue
        st = metrics.diff_stats(ref[name], fast[name])
        exact &= st.max_abs == 0
        print(f"{name}: max_abs={st.max_abs} mean_abs={st.mean_abs:.6g} nonzero={st.count_nonzero}")
    g_diff = metrics.diff_stats(ref["g"], fast["g"])
    ssim = metrics.ssim_global(ref["g"], fast["g"]).ssim
    print(f"g: max_abs={g_diff.max_abs:.3g}")
    print(f"ssim={ssim!r}")
    ok = exact and ssim >= SSIM_THRESHOLD
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_bench(cfg: RunConfig, args) -> int:
    sink = open(args.out, "w") if args.out else None
    try:
        target = sink or sys.stdout
        print(metrics.BenchReport.csv_header(), file=target, flush=True)
        for size in cfg.sizes:
            img = random_image(size, size, cfg.seed)
            for backend in BACKENDS:
                report = metrics.measure(
                    lambda: compute(img, cfg, backend),
                    cfg.iters,
                    width=size,
                    height=size,
                    label=f"{cfg.operator}/{backend}",
                    workers=cfg.workers,
                )
                print(report.csv_row(), file=target, flush=True)
    finally:
        if sink:
            sink.close()
    return 0


def _fmt(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else str(value)


def format_table(title: str, rows) -> str:
    cells = [[_fmt(v) for v in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    body = "\n".join("  " + " ".join(c.rjust(width) for c in row) for row in cells)
    return f"{title}\n{body}"


def cmd_kernels(cfg: RunConfig, args) -> int:
    p = cfg.params
    blocks = [format_table(f"K_{d.value.lower()}", materialize(p, d).tolist()) for d in Direction]
    kd_plus, kd_minus = make_kd_sum_diff(p)
    blocks.append(format_table("kd_plus = K_d + K_dt", kd_plus.tolist()))
    blocks.append(format_table("kd_minus = K_d - K_dt", kd_minus.tolist()))
    s1, s2 = decompose_kd_minus(p)
    blocks.append(f"kd_minus = {p.a} * (s1.col x s1.row - s2.col x s2.row)")
    blocks.append(format_table("s1.col", [s1.col]))
    blocks.append(format_table("s1.row", [s1.row]))
    blocks.append(format_table("s2.col", [s2.col]))
    blocks.append(format_table("s2.row", [s2.row]))
    print(f"params {p}\n")
    print("\n\n".join(blocks))
    return 0


COMMANDS = {"detect": cmd_detect, "verify": cmd_verify, "bench": cmd_bench, "kernels": cmd_kernels}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="key = value file; flags override it")
    g.add_argument("--operator", help="sobel5_4d (default) or sobel3_2d")
    g.add_argument("--backend", help="oracle or fast (default)")
    for name in ("a", "b", "m", "n"):
        g.add_argument(f"--{name}", help=f"filter parameter {name}")
    g.add_argument("--prefetch", help="on (default) or off")
    g.add_argument("--lanes", help="lanes per strip (default 32)")
    g.add_argument("--block-rows", dest="block_rows", help="rows per streamed block, 0 for whole columns")
    g.add_argument("--pad", help="replicate (default) or none")
    g.add_argument("--workers", help="parallel strip groups (default 1)")
    g.add_argument("--mode", help="magnitude export: normalize (default) or clamp_abs")
    g.add_argument("--seed", help="seed for synthesized images")

    parser = argparse.ArgumentParser(prog="fastsobel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", parents=[common], help="write an edge magnitude image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--dump-planes", metavar="DIR", help="also write the directional planes")

    p = sub.add_parser("verify", parents=[common], help="compare fast and oracle backends")
    p.add_argument("input", nargs="?")
    p.add_argument("--random", metavar="WxH", help="use a synthesized image instead of a file")

    p = sub.add_parser("bench", parents=[common], help="throughput CSV for both backends")
    p.add_argument("--sizes", help="comma-separated square sizes (default 512,1024,2048)")
    p.add_argument("--iters", help="timed iterations per run (default 100)")
    p.add_argument("--out", help="write CSV here instead of stdout")

    sub.add_parser("kernels", parents=[common], help="print the filter matrices")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args)
    except (SobelError, OSError, ValueError) as exc:
        print(f"fastsobel: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
