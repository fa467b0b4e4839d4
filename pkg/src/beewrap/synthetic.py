"""Synthetic datasets for tests and offline demos."""

from __future__ import annotations

import numpy as np

from beewrap.dataset import Dataset, FeatureDescriptor, FeatureKind, save_dataset

__all__ = ["planted_linear_dataset", "nir_like_dataset", "write_demo_csv"]

PROCESS_NAMES_13 = (
    "die_temp_zone_1",
    "die_temp_zone_2",
    "die_temp_zone_3",
    "die_temp_zone_4",
    "barrel_temp_zone_1",
    "barrel_temp_zone_2",
    "barrel_temp_zone_3",
    "barrel_temp_zone_4",
    "screw_speed",
    "feed_rate",
    "melt_temperature",
    "melt_pressure",
    "spool_speed",
)


def planted_linear_dataset(
    n: int = 60,
    p: int = 20,
    signal: tuple[int, int] = (1, 7),
    coeffs: tuple[float, float] = (3.0, -2.0),
    noise: float = 0.01,
    seed: int = 0,
) -> Dataset:
    """Gaussian features where only two columns carry the target signal.

    y = coeffs[0] * X[:, signal[0]] + coeffs[1] * X[:, signal[1]] + noise.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    X = rng.standard_normal((n, p))
    y = coeffs[0] * X[:, signal[0]] + coeffs[1] * X[:, signal[1]]
    y = y + noise * rng.standard_normal(n)
    descriptors = tuple(FeatureDescriptor(f"x{i:02d}", FeatureKind.PROCESS) for i in range(p))
    return Dataset(X, y, descriptors)


def nir_like_dataset(
    n: int = 63,
    wavenumber_lo: int = 6101,
    wavenumber_hi: int = 6599,
    wavenumber_step: int = 1,
    seed: int = 0,
) -> Dataset:
    """Extrusion-shaped stand-in: wavenumber-named absorbance columns plus 13
    process settings, with a molecular-weight target in the tens of kDa.

    The target depends on a few absorbance bands and the melt temperature, so
    small informative subsets exist for the search to find.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    wavenumbers = np.arange(wavenumber_lo, wavenumber_hi + 1, wavenumber_step)
    w = wavenumbers.astype(float)

    # smooth latent spectra: two broad absorbance bands moved by hidden state
    state = rng.standard_normal((n, 2))
    band1 = np.exp(-0.5 * ((w - 6200.0) / 40.0) ** 2)
    band2 = np.exp(-0.5 * ((w - 6450.0) / 60.0) ** 2)
    spectra = (
        0.8
        + 0.05 * state[:, :1] * band1[None, :]
        + 0.04 * state[:, 1:2] * band2[None, :]
        + 0.002 * rng.standard_normal((n, w.size))
    )

    process = np.empty((n, len(PROCESS_NAMES_13)))
    for j in range(len(PROCESS_NAMES_13)):
        process[:, j] = rng.normal(loc=100.0 + 10.0 * j, scale=3.0, size=n)
    melt_temp = process[:, PROCESS_NAMES_13.index("melt_temperature")]

    y = (
        42_000.0
        + 2_000.0 * state[:, 0]
        - 1_500.0 * state[:, 1]
        - 180.0 * (melt_temp - melt_temp.mean())
        + 150.0 * rng.standard_normal(n)
    )

    descriptors = tuple(
        FeatureDescriptor(str(int(v)), FeatureKind.NIR_WAVENUMBER, float(v)) for v in wavenumbers
    ) + tuple(FeatureDescriptor(name, FeatureKind.PROCESS) for name in PROCESS_NAMES_13)
    X = np.concatenate([spectra, process], axis=1)
    return Dataset(X, y, descriptors)


def write_demo_csv(path, n: int = 63, seed: int = 0) -> None:
    """Write an extrusion-shaped demo CSV (target column 'Mn') to path."""
    save_dataset(nir_like_dataset(n=n, seed=seed), path, target_column="Mn")


if __name__ == "__main__":
    import sys

    out = sys.argv[1] if len(sys.argv) > 1 else "demo_dataset.csv"
    write_demo_csv(out)
    print(f"wrote {out}")
