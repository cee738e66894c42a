"""Named material parameter sets."""

from typing import Dict, List

from src.core.constants import TWO_PI
from src.core.errors import DomainError
from src.models.specs import MaterialSpec

PRESETS: Dict[str, MaterialSpec] = {
    "rare-earth-crystal-typical": MaterialSpec(
        name="rare-earth-crystal-typical",
        w13=TWO_PI * 1e9,
        w12=TWO_PI * 1e4,
        gamma12=TWO_PI * 1e2,
        gamma13=1e7,
        d13=1e-30,
        density=1e24,
        wavelength=606e-9,
        provenance=(
            "[published range] W13 in 1-10 GHz, W12 in 100 Hz-1 MHz, density 1e18 cm^-3, "
            "d13 1e-30 C m, gamma13 1e7 1/s; [indicative] gamma12 and wavelength"
        ),
    ),
    "rare-earth-optimistic": MaterialSpec(
        name="rare-earth-optimistic",
        w13=TWO_PI * 1e9,
        w12=TWO_PI * 1e2,
        gamma12=TWO_PI * 1.0,
        gamma13=TWO_PI * 1e3,
        d13=1e-30,
        density=1e25,
        wavelength=606e-9,
        provenance=(
            "[published range] W13 at 1 GHz, W12 at the 100 Hz end; "
            "[indicative] decay rates and density"
        ),
    ),
    "nv-diamond-indicative": MaterialSpec(
        name="nv-diamond-indicative",
        w13=TWO_PI * 1e10,
        w12=TWO_PI * 1e6,
        gamma12=TWO_PI * 1e3,
        gamma13=TWO_PI * 1e7,
        d13=5e-30,
        density=1e23,
        wavelength=637e-9,
        provenance="[indicative] order-of-magnitude values for NV centres; no published set used",
    ),
    "doped-fiber-indicative": MaterialSpec(
        name="doped-fiber-indicative",
        w13=TWO_PI * 1e12,
        w12=TWO_PI * 1e6,
        gamma12=TWO_PI * 1e3,
        gamma13=TWO_PI * 1e5,
        d13=1e-31,
        density=1e25,
        wavelength=1.536e-6,
        provenance="[indicative] erbium-doped glass orders of magnitude",
    ),
}


def preset_names() -> List[str]:
    return sorted(PRESETS)


def get_preset(name: str) -> MaterialSpec:
    """Look up a preset by name."""
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown material preset '{name}'; choose from {', '.join(preset_names())}") from None
