import numpy as np

from finitetype.geometry import AnalyticCurve


def wavy_curve():
    """kappa = 1 + 0.3 sin t, tau = 0.2 + 0.1 cos t, with exact derivatives."""
    return AnalyticCurve(
        lambda t: 1 + 0.3 * np.sin(t),
        lambda t: 0.2 + 0.1 * np.cos(t),
        (0.0, 6.0),
        kappa_derivs=[lambda t: 0.3 * np.cos(t), lambda t: -0.3 * np.sin(t), lambda t: -0.3 * np.cos(t)],
        tau_derivs=[lambda t: -0.1 * np.sin(t), lambda t: -0.1 * np.cos(t), lambda t: 0.1 * np.sin(t)],
    )
