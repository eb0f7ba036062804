"""Command-line entry point: ``framedeblur {deblur,blur,evaluate,kernel}``.

Exit status is 0 on success, 1 on usage or input errors and 2 when the
computation fails. Diagnostics go to stderr, results to stdout. Outputs are
only written once every computation for the command has succeeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from .errors import DeblurError, ImageFormatError
from .imageio import check_writable, kernel_to_image, read_image, read_kernel_text, write_image, write_kernel_text
from .imgcore import BoundaryMode
from .kernelest import KernelParams
from .latent import LatentParams
from .metrics import evaluate
from .pipeline import PipelineConfig, deblur_blind
from .synth import KernelSpec, NoiseSpec, blur, make_kernel

log = logging.getLogger("framedeblur")

# config-file key -> (type, default)
CONFIG_KEYS = {
    "kernel_size": (int, 25),
    "lambda": (float, KernelParams.order),
    "alpha": (float, KernelParams.alpha),
    "gamma1": (float, LatentParams.gamma1),
    "gamma2": (float, KernelParams.gamma2),
    "sigma": (float, LatentParams.sigma),
    "scale": (float, PipelineConfig.scale),
    "truncation": (float, KernelParams.truncation),
    "boundary": (str, "periodic"),
    "seed": (int, 0),
    "noise": (float, 0.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_config(path) -> dict:
    """Parse ``key = value`` lines (``#`` starts a comment) into typed overrides."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip().replace("-", "_"), value.strip()
            if not sep or not key:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            if key not in CONFIG_KEYS:
                valid = ", ".join(sorted(CONFIG_KEYS))
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}; valid keys: {valid}")
            typ = CONFIG_KEYS[key][0]
            try:
                out[key] = typ(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def resolve_settings(args) -> dict:
    """Defaults, then config-file values, then explicit flags."""
    settings = {k: default for k, (_, default) in CONFIG_KEYS.items()}
    if getattr(args, "config", None):
        settings.update(load_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _add_params(p, *keys):
    flags = {
        "kernel_size": ("--kernel-size", int, "odd kernel side in pixels"),
        "lambda": ("--lambda", float, "fractional gradient order"),
        "alpha": ("--alpha", float, "l1 weight of the kernel prior, in [0, 1]"),
        "gamma1": ("--gamma1", float, "image prior weight"),
        "gamma2": ("--gamma2", float, "kernel prior weight"),
        "sigma": ("--sigma", float, "intensity prior weight"),
        "scale": ("--scale", float, "pyramid scale factor"),
        "truncation": ("--truncation", float, "gradient truncation factor"),
        "boundary": ("--boundary", str, "zero, periodic or reflexive"),
        "seed": ("--seed", int, "noise seed"),
        "noise": ("--noise", float, "Gaussian noise std"),
    }
    for key in keys:
        flag, typ, help_ = flags[key]
        p.add_argument(flag, dest=key, type=typ, default=None, help=help_)
    p.add_argument("--config", help="key = value configuration file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="framedeblur", description="Blind deblurring with framelet kernel priors.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("deblur", help="estimate the kernel and restore an image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--save-kernel", help="kernel image, max weight mapped to white")
    p.add_argument("--save-kernel-txt", help="raw normalized kernel as a text grid")
    p.add_argument("--truth", help="ground-truth image for per-level PSNR and final metrics")
    _add_params(p, "kernel_size", "lambda", "alpha", "gamma1", "gamma2", "sigma",
                "scale", "truncation")

    p = sub.add_parser("blur", help="apply a synthetic kernel and noise")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--kernel", required=True, help="kind[:p1[:p2]], e.g. motion:15:45")
    p.add_argument("--save-kernel-txt")
    _add_params(p, "noise", "seed", "boundary")

    p = sub.add_parser("evaluate", help="compare a restored image with ground truth")
    p.add_argument("--restored", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--kernel", help="estimated kernel text grid")
    p.add_argument("--true-kernel", help="reference kernel text grid or spec")

    p = sub.add_parser("kernel", help="render a synthetic kernel")
    p.add_argument("--kernel", required=True, help="kind[:p1[:p2]]")
    p.add_argument("--output", required=True)
    p.add_argument("--save-kernel-txt")
    return parser


def _pipeline_config(s) -> PipelineConfig:
    return PipelineConfig(
        kernel_size=s["kernel_size"],
        scale=s["scale"],
        latent=LatentParams(gamma1=s["gamma1"], sigma=s["sigma"]),
        kernel=KernelParams(gamma2=s["gamma2"], alpha=s["alpha"], order=s["lambda"],
                            truncation=s["truncation"]),
    )


def _load_kernel(arg):
    try:
        return read_kernel_text(arg)
    except (OSError, ValueError):
        return make_kernel(KernelSpec.parse(arg))


def _run(args) -> list:
    """Execute the command; returns deferred ``(writer, path, data)`` outputs."""
    writes = []
    for attr in ("output", "save_kernel"):
        if getattr(args, attr, None):
            check_writable(getattr(args, attr))
    if args.command == "deblur":
        s = resolve_settings(args)
        try:
            cfg = _pipeline_config(s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        y = read_image(args.input)
        truth = read_image(args.truth) if args.truth else None
        result = deblur_blind(y, cfg, truth=truth)
        sys.stderr.write(result.diagnostics_text())
        if result.unidentifiable:
            log.warning("no gradient information in input; returning a delta kernel")
        writes.append((write_image, args.output, result.restored))
        if args.save_kernel:
            writes.append((write_image, args.save_kernel, kernel_to_image(result.kernel)))
        if args.save_kernel_txt:
            writes.append((write_kernel_text, args.save_kernel_txt, result.kernel))
        print(f"kernel_size={result.kernel.shape[0]}")
        if truth is not None:
            sys.stdout.write(evaluate(result.restored, truth).to_text())
    elif args.command == "blur":
        s = resolve_settings(args)
        try:
            k = make_kernel(KernelSpec.parse(args.kernel))
            mode = BoundaryMode.parse(s["boundary"])
            noise = NoiseSpec(s["noise"], s["seed"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        x = read_image(args.input)
        if x.ndim == 3:
            y = np.stack([blur(x[..., c], k, mode, replace(noise, seed=noise.seed + c))
                          for c in range(3)], axis=-1)
        else:
            y = blur(x, k, mode, noise)
        writes.append((write_image, args.output, y))
        if args.save_kernel_txt:
            writes.append((write_kernel_text, args.save_kernel_txt, k))
    elif args.command == "evaluate":
        restored = read_image(args.restored)
        truth = read_image(args.truth)
        if restored.shape != truth.shape:
            raise UsageError(f"image sizes differ: {restored.shape} vs {truth.shape}")
        k = k_true = None
        try:
            if args.kernel:
                k = _load_kernel(args.kernel)
            if args.true_kernel:
                k_true = _load_kernel(args.true_kernel)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        sys.stdout.write(evaluate(restored, truth, k, k_true).to_text())
    elif args.command == "kernel":
        try:
            k = make_kernel(KernelSpec.parse(args.kernel))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        writes.append((write_image, args.output, kernel_to_image(k)))
        if args.save_kernel_txt:
            writes.append((write_kernel_text, args.save_kernel_txt, k))
    return writes


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        writes = _run(args)
    except (UsageError, ImageFormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except DeblurError as exc:
        sys.stderr.write(f"computation failed: {exc}\n")
        return 2
    try:
        for writer, path, data in writes:
            writer(path, data)
    except (ImageFormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
