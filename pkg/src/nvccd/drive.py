"""Concatenated continuous-decoupling drive fields of orders I-III.

Each microwave branch (|0> <-> |-1> is "minus", |0> <-> |+1> is "plus")
carries a carrier at its own frequency.  Order II adds a weaker term in
quadrature with the carrier, enveloped at the order-I Rabi frequency so it
bridges the first-order dressed states; order III adds a yet weaker in-phase
term enveloped at the order-II amplitude.  The rotating-wave picture that
motivates the construction requires amp3 << amp2 << amp1; violations only
warn, never reject, since the integrators remain well defined.

Relative microwave-source noise, when attached, scales the order-I amplitude
factor only: the envelopes keep their nominal frequencies.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import IntEnum

from . import _rhs
from .noise import OUProcess


class DriveOrder(IntEnum):
    CONSTANT = _rhs.ORDER_CONSTANT
    FIRST = _rhs.ORDER_FIRST
    SECOND = _rhs.ORDER_SECOND
    THIRD = _rhs.ORDER_THIRD

    @classmethod
    def parse(cls, value) -> "DriveOrder":
        if isinstance(value, cls):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return cls(value)
        names = {
            "constant": cls.CONSTANT, "const": cls.CONSTANT, "0": cls.CONSTANT,
            "first": cls.FIRST, "1": cls.FIRST, "i": cls.FIRST,
            "second": cls.SECOND, "2": cls.SECOND, "ii": cls.SECOND,
            "third": cls.THIRD, "3": cls.THIRD, "iii": cls.THIRD,
        }
        key = str(value).strip().lower()
        if key not in names:
            raise ValueError(f"unknown drive order {value!r} "
                             f"(expected constant/first/second/third)")
        return names[key]


@dataclass
class DriveConfig:
    """Amplitudes and frequencies of the two drive branches.

    All quantities are dimensionless (energies in units of the zero-field
    splitting, times in its inverse).  For order CONSTANT the amplitude is
    ``constant_value`` on both branches, falling back to the per-branch
    order-I amplitude when ``constant_value`` is None.  ``amplitude_noise``
    optionally attaches a relative-noise sample stream consumed by the
    propagators (one shared microwave source, same factor on both branches).
    """

    order: DriveOrder = DriveOrder.FIRST
    omega_plus: float = 0.0
    omega_minus: float = 0.0
    amp1_plus: float = 0.0
    amp1_minus: float = 0.0
    amp2_plus: float = 0.0
    amp2_minus: float = 0.0
    amp3_plus: float = 0.0
    amp3_minus: float = 0.0
    constant_value: float | None = None
    amplitude_noise: OUProcess | None = field(default=None, repr=False)

    def __post_init__(self):
        self.order = DriveOrder.parse(self.order)
        for message in validate(self):
            warnings.warn(message, stacklevel=3)

    def branch(self, branch: str) -> tuple[float, float, float, float, float]:
        """(omega, amp1, amp2, amp3, constant) for one branch."""
        if branch == "plus":
            const = self.constant_value if self.constant_value is not None else self.amp1_plus
            return self.omega_plus, self.amp1_plus, self.amp2_plus, self.amp3_plus, const
        if branch == "minus":
            const = self.constant_value if self.constant_value is not None else self.amp1_minus
            return self.omega_minus, self.amp1_minus, self.amp2_minus, self.amp3_minus, const
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def drive_amplitude(cfg: DriveConfig, branch: str, t: float,
                    noise: float | None = None) -> float:
    """Drive amplitude Omega_branch(t); ``noise`` is the relative
    microwave fluctuation zeta1 applied to the order-I amplitude factor."""
    omega, a1, a2, a3, const = cfg.branch(branch)
    zeta1 = 0.0 if noise is None else float(noise)
    return _rhs.drive_scalar(int(cfg.order), omega, a1, a2, a3, const, t, zeta1)


def validate(cfg: DriveConfig) -> list[str]:
    """Advisory checks; returns human-readable warnings, never rejects."""
    messages = []
    for name in ("amp1_plus", "amp1_minus", "amp2_plus", "amp2_minus",
                 "amp3_plus", "amp3_minus"):
        if getattr(cfg, name) < 0.0:
            messages.append(f"negative amplitude {name}={getattr(cfg, name)}")
    for side in ("plus", "minus"):
        a1 = getattr(cfg, f"amp1_{side}")
        a2 = getattr(cfg, f"amp2_{side}")
        a3 = getattr(cfg, f"amp3_{side}")
        if a2 > a1 or a3 > a2:
            messages.append(
                f"RWA hierarchy violated on {side} branch: "
                f"requires amp3 <= amp2 <= amp1, got ({a1}, {a2}, {a3})")
    if cfg.order != DriveOrder.CONSTANT:
        if cfg.omega_plus == 0.0 and cfg.omega_minus == 0.0:
            messages.append("zero drive frequency on both branches of a periodic drive")
    return messages
