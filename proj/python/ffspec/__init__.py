"""Far-field operator spectra and phaseless inverse scattering."""

import json

from ._ffspec import (
    AlignmentError,
    ConfigError,
    DirectionRule,
    DisambiguationError,
    DomainError,
    Error,
    FarFieldKernel,
    InconsistentDataError,
    PhaselessDataset,
    RetrievedKernel,
    Scatterer,
    SolveError,
    TruncationError,
    circle_center,
    circle_radius,
    compare_datasets,
    cyl_bessel_j,
    cyl_bessel_y,
    eigenvalues,
    farfield_kernel,
    kernel_from_values,
    legendre_p,
    limit_sign,
    mie_coefficients,
    perturb_dataset,
    read_dataset,
    reciprocity_residual,
    relative_max_error,
    retrieve,
    s1_rule,
    s2_rule,
    scattering_coupling,
    shift_kernel,
    sph_bessel_j,
    sph_bessel_y,
    sph_hankel1,
    synth_dataset,
    write_dataset,
)
from . import _ffspec

__version__ = "0.1.0"


def scatterer(shape="sphere", condition="dirichlet", k=1.0, **params):
    """Build a scatterer from the same fields a scenario config uses.

    Example: scatterer("sphere", "impedance", k=2.0, radius=1.0, eta=1.0).
    """
    spec = {"shape": shape, "condition": condition}
    spec.update(params)
    return _ffspec._scatterer_from_json(json.dumps(spec), float(k))


def rule(**params):
    """rule(n_polar=16, n_azimuth=32) on S^2 or rule(n_circle=64) on S^1."""
    return _ffspec._rule_from_json(json.dumps(params))


def diagnose(kernel, expected_sign):
    """Spectral diagnostics of the far-field operator as a dict."""
    return json.loads(_ffspec._diagnose(kernel, int(expected_sign)))


def retrieval_report(result):
    return json.loads(result._report())


def run_config(config, out_dir):
    """Run a scenario config (dict) into out_dir; returns the exit code."""
    return _ffspec._run_config(json.dumps(config), str(out_dir))


def corpus():
    """Bundled scenario configs as dicts."""
    return [json.loads(text) for text in _ffspec._corpus()]
