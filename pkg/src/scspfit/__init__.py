"""Scale-space analysis of learned depthwise filters: discrete Gaussian
kernels, spread measures, normalization, idealized-model fitting and affine
approximation."""
from .approx import CANONICAL_SPECS, AffineMatch, affine_fit, classify, reference_bank
from .bankio import FilterBank, load_bank, loads_bank, dumps_bank, save_bank
from .exceptions import BankFormatError, DegenerateError, NonConvergenceError, ScaleSpaceError
from .fit import FitResult, Method, Norm, fit, fit_sharpen7, method_a, method_b, method_norm_fit
from .kernels import (Family, FilterGrid, IdealizedSpec, Op, ScalePair, apply_op, bessel_i,
                      diff_molecule, disc_gauss_1d, disc_gauss_2d, ideal_filter, impulse)
from .measures import (SpreadMeasure, WeightShape, WeightSpec, cont_weighted_variance, l1_norm,
                       l2_norm, respond_to_monomial, spread)
from .normalize import (NormalizedFilter, NormKind, dc_compensate, normalize_derivative,
                        normalize_for_family, normalize_mixed)
from .optim import Bounds1D
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .render import render_ppm
from .report import ReportTable

__version__ = "0.1.0"
