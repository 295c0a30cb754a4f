"""Frozen oracle values for the shared placement suite."""
import json
from fractions import Fraction
from pathlib import Path

PATH = Path(__file__).parent / "data" / "oracle_frozen.json"


def load():
    rows = json.loads(PATH.read_text())
    out = {}
    for r in rows:
        out[r["seed"]] = {
            "k": r["k"], "q": Fraction(r["q"]), "max_flow": Fraction(r["max_flow"]),
            "pc": Fraction(r["pc"]), "pq": None if r["pq"] is None else Fraction(r["pq"]),
        }
    return out
