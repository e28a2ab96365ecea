"""Static MTJ device physics.

Geometry and material parameters of one junction, demagnetizing factors of
the elliptic-cylinder free layer, the uniaxial anisotropy field that realizes
a configured energy barrier, conductance readout, the in-plane energy
landscape and the Arrhenius retention lifetime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import j1, jn_zeros, roots_legendre

from .constants import CONSTANTS, PhysicalConstants
from .errors import ConfigurationError
from .vectors import dot, norm


@dataclass(frozen=True)
class DeviceParams:
    """One MTJ: geometry, magnetics and conductance endpoints (all SI).

    axis_a is the in-plane ellipse axis along the easy (+x) direction, which
    is also the pinned-layer direction by convention; the initial
    antiparallel state points along -x.
    """

    axis_a: float = 40e-9        # in-plane ellipse axis, easy direction [m]
    axis_b: float = 40e-9        # in-plane ellipse axis [m]
    thickness: float = 1.5e-9    # free layer thickness [m]
    m_s: float = 1.0e6           # saturation magnetization [A/m]
    alpha: float = 0.0122        # Gilbert damping
    eta: float = 0.5             # spin-polarization efficiency of the PL
    e_b: float = 31.44 * 1.3806488e-23 * 300.0   # energy barrier [J]
    g_p: float = 1.0e-3          # parallel conductance [S]
    g_ap: float = 0.5e-3         # antiparallel conductance [S]
    t_k: float = 300.0           # temperature [K]
    m_p: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))

    def __post_init__(self):
        for name in ("axis_a", "axis_b", "thickness"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.m_s < 0:
            raise ConfigurationError(f"m_s must be >= 0, got {self.m_s}")
        if self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not 0.0 < self.eta <= 1.0:
            raise ConfigurationError(f"eta must be in (0, 1], got {self.eta}")
        if self.e_b < 0:
            raise ConfigurationError(f"e_b must be >= 0, got {self.e_b}")
        if not self.g_p > self.g_ap > 0:
            raise ConfigurationError(
                f"need g_p > g_ap > 0, got g_p={self.g_p}, g_ap={self.g_ap}")
        if self.t_k < 0:
            raise ConfigurationError(f"t_k must be >= 0, got {self.t_k}")
        mp = np.asarray(self.m_p, dtype=float)
        if abs(norm(mp) - 1.0) > 1e-9:
            raise ConfigurationError("m_p must be a unit vector")
        object.__setattr__(self, "m_p", mp)

    @property
    def volume(self) -> float:
        """Elliptic-disk free layer volume (pi/4) a b t [m^3]."""
        return np.pi / 4.0 * self.axis_a * self.axis_b * self.thickness


@dataclass(frozen=True)
class DemagTensor:
    """Diagonal demagnetizing factors along the principal axes.

    For a physical body n_x + n_y + n_z == 1.
    """

    n_x: float
    n_y: float
    n_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.n_x, self.n_y, self.n_z])

    @classmethod
    def isotropic(cls) -> "DemagTensor":
        """Sphere-equivalent tensor; exerts no torque on a macrospin."""
        return cls(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


# --- magnetometric demag factors of an elliptic cylinder -------------------
#
# In Fourier space the volume-averaged factor reduces to 1D/2D integrals of
# the squared shape amplitude.  With semi-axes A, B, thickness t and
# g(phi) = sqrt(A^2 cos^2 + B^2 sin^2):
#
#   F(s)  = int_0^inf (J1(u)/u)^2 (1 - exp(-u s)) du
#   N_zz  = (A B / (pi t)) int_0^2pi F(t/g) / g dphi
#   N_xx  = (A B / pi) int_0^2pi cos^2(phi) [1/(2 g^2) - F(t/g)/(g t)] dphi
#
# and N_yy with sin^2.  The Bessel integrand oscillates, so F is accumulated
# between consecutive J1 zeros with an analytic 1/(2 pi U^2) tail.

_J1_ZEROS = None
_GL_NODES = roots_legendre(16)


def _bessel_zeros():
    global _J1_ZEROS
    if _J1_ZEROS is None:
        _J1_ZEROS = jn_zeros(1, 4000)
    return _J1_ZEROS


def _f_kernel(s: float, upper: float = 4000.0) -> float:
    """Gauss-Legendre between consecutive J1 zeros; the interval below the
    first zero is subdivided to resolve the exponential, and the truncated
    tail is added analytically.  Accurate to ~2e-8 absolute."""
    zeros = _bessel_zeros()
    z = zeros[zeros < upper]
    pts = np.concatenate([np.linspace(0.0, z[0], 33), z[1:], [upper]])
    glx, glw = _GL_NODES
    lo, hi = pts[:-1], pts[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    u = mid[:, None] + half[:, None] * glx[None, :]
    w = half[:, None] * glw[None, :]
    integrand = (j1(u) / u) ** 2 * (1.0 - np.exp(-u * s))
    return float(np.sum(integrand * w)) + 1.0 / (2.0 * np.pi * upper**2)


def demag_factors(params: DeviceParams, n_phi: int = 64) -> DemagTensor:
    """Magnetometric demagnetizing factors of the elliptic-cylinder free layer.

    Quadrature of the shape-amplitude integrals; the circular case collapses
    to a single radial integral.  Expensive enough to compute once per device
    and reuse.
    """
    a2 = params.axis_a / 2.0
    b2 = params.axis_b / 2.0
    t = params.thickness

    if params.axis_a == params.axis_b:
        s = t / a2
        f = _f_kernel(s)
        n_z = 2.0 / s * f
        n_x = n_y = (1.0 - n_z) / 2.0
        return DemagTensor(n_x, n_y, n_z)

    # elliptic: Gauss-Legendre on [0, pi/2], integrands have fourfold symmetry
    x, w = roots_legendre(n_phi)
    phi = 0.25 * np.pi * (x + 1.0)
    wphi = 0.25 * np.pi * w
    g = np.sqrt((a2 * np.cos(phi)) ** 2 + (b2 * np.sin(phi)) ** 2)
    f = np.array([_f_kernel(t / gi) for gi in g])

    n_z = a2 * b2 / (np.pi * t) * 4.0 * np.sum(wphi * f / g)
    n_x = a2 * b2 / np.pi * 4.0 * np.sum(
        wphi * np.cos(phi) ** 2 * (0.5 / g**2 - f / (g * t)))
    n_y = a2 * b2 / np.pi * 4.0 * np.sum(
        wphi * np.sin(phi) ** 2 * (0.5 / g**2 - f / (g * t)))
    return DemagTensor(n_x, n_y, n_z)


def anisotropy_field(params: DeviceParams,
                     constants: PhysicalConstants = CONSTANTS) -> float:
    """Uniaxial easy-axis field H_k = 2 E_B / (mu_0 M_s V) [A/m].

    This is the in-plane anisotropy along +x that reproduces the configured
    barrier E(theta) = E_B sin^2(theta).
    """
    v = params.volume
    if v <= 0 or params.m_s <= 0:
        raise ConfigurationError("anisotropy_field needs positive volume and m_s")
    return 2.0 * params.e_b / (constants.mu_0 * params.m_s * v)


def num_spins(params: DeviceParams,
              constants: PhysicalConstants = CONSTANTS) -> float:
    """Number of spins in the free layer, M_s V / mu_B."""
    return params.m_s * params.volume / constants.mu_b


def conductance(m: np.ndarray, params: DeviceParams) -> np.ndarray:
    """Junction conductance G_P cos^2(theta/2) + G_AP sin^2(theta/2) [S].

    theta is the angle between the free-layer magnetization `m` (shape
    (..., 3)) and the pinned layer.
    """
    cos_theta = dot(np.asarray(m, dtype=float), params.m_p)
    return 0.5 * (params.g_p + params.g_ap) + 0.5 * (params.g_p - params.g_ap) * cos_theta


def energy(theta, params: DeviceParams) -> np.ndarray:
    """In-plane energy landscape E_B sin^2(theta) [J].

    Minima at theta = 0 (P) and pi (AP), barrier E_B at pi/2.
    """
    return params.e_b * np.sin(theta) ** 2


def magnetic_energy(m: np.ndarray, params: DeviceParams, demag: DemagTensor,
                    constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Total magnetic energy of a state: uniaxial + demag self-energy [J].

    The Lyapunov function of zero-temperature, zero-current dynamics.
    """
    m = np.asarray(m, dtype=float)
    e_demag = (0.5 * constants.mu_0 * params.m_s**2 * params.volume
               * dot(m * m, demag.as_array()))
    e_uni = params.e_b * (1.0 - m[..., 0] ** 2)
    return e_demag + e_uni


def retention_lifetime(params: DeviceParams, attempt_time: float = 1e-9,
                       constants: PhysicalConstants = CONSTANTS) -> float:
    """Arrhenius lifetime attempt_time * exp(E_B / k_B T) [s]."""
    if attempt_time <= 0:
        raise ConfigurationError(f"attempt_time must be positive, got {attempt_time}")
    if params.t_k <= 0:
        raise ConfigurationError("retention lifetime needs t_k > 0")
    return attempt_time * np.exp(params.e_b / (constants.k_b * params.t_k))
