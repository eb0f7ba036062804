"""Blind image deblurring with framelet-domain kernel priors and fractional gradients."""

from .errors import (DeblurError, DegenerateKernelError, DimensionError, ImageFormatError,
                     SingularSystemError)
from .framelet import analyze, synthesize
from .fracgrad import GLStencil, frac_grad, frac_grad_adjoint, gl_coeffs
from .imgcore import (BoundaryMode, build_pyramid, convolve2d, delta_kernel, normalize_kernel,
                      resample_bilinear, resize_kernel)
from .imageio import read_image, write_image
from .kernelest import KernelParams, estimate_kernel
from .latent import LatentParams, estimate_latent
from .metrics import MetricReport, kernel_xcorr, ms_ssim, psnr, ssim
from .pipeline import DeblurResult, PipelineConfig, deblur_blind, edge_taper, final_nonblind
from .synth import KernelKind, KernelSpec, NoiseSpec, blur, make_kernel, piecewise_constant_scene

__version__ = "0.1.0"
