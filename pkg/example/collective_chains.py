"""Compare trivial and optimised encodings for two chains under collective noise."""

from wasabi import msg

from hotgate.classical_noise import build_ensemble, collective_chains
from hotgate.encoding_optimizer import OptimizationConfig, infidelity_curve, log_grid
from hotgate.geometry import CouplingLaw

if __name__ == "__main__":
    ensemble = build_ensemble(collective_chains(4, 4, dx=1.0, dy=1.0, sigma=3.0), CouplingLaw(J=1.0, gamma=1))
    curve = infidelity_curve(ensemble, OptimizationConfig(dt_grid=log_grid(0.01, 10.0, 40)))
    df = curve.to_frame()
    best = df["infidelity_optimized"].idxmin()
    msg.good(f"lowest infidelity {df['infidelity_optimized'][best]:.3e} at Δt = {df['delta_t'][best]:.3g}")
    msg.table(
        df[["delta_t", "infidelity_trivial", "infidelity_optimized"]].round(6).values.tolist(),
        header=("Δt", "trivial", "optimised"),
        divider=True,
    )
