"""Score the optimizer on de-optimized (flattened, shuffled) corpus designs.

    python3 scripts/run_deopt_recovery.py --n 200 --seed 42
"""
from __future__ import annotations

from run_roundtrip import RoundTripConfig, main

if __name__ == "__main__":
    main(defaults=RoundTripConfig(source="deoptimized", out="runs/deopt"))
