"""Regenerate src/crashmine/data/synthetic_crash_narratives.csv.

The narratives are template-built English crash reports covering the usual
themes of freeway crash records: collisions, tire and mechanical failures,
animals on the road, lane and rule violations, road hazards.  Output is
deterministic (portable generator, fixed seed).
"""
import csv
import sys
from pathlib import Path

from crashmine.topic_model._rng import Xoshiro256

SEED = 2018

ROUTES = ["airport road", "desert highway", "route 30", "route 35", "dead sea highway"]

OPENINGS = [
    "Private car on the {route} at noon.",
    "Pickup truck on the {route}, at night.",
    "Bus on the {route}, in the early morning.",
    "Heavy truck on the {route} near the bridge.",
    "Taxi on the {route}, during rain.",
    "Small van on the {route}.",
]

EVENTS = [
    " Tire explosion, then collision with a light pole.",
    " Sudden change of direction and collision with the cement barrier.",
    " Collision with an animal (sheep) crossing the road.",
    " Collision with a stray dog, then with a fixed object.",
    " Driving in the opposite lane; collision with an oncoming vehicle.",
    " Entering the wrong lane, collision with the rear end of a bus.",
    " Driving in a reckless manner; collision with an electricity pole.",
    " Noncompliance with traffic rules at the junction.",
    " Oil bleeding on the road; the car hit a waste container.",
    " Concrete debris on the lane caused loss of control.",
    " Vehicle failure on the shoulder, then a rear end collision.",
    " Health condition of the driver; collision with a light pole.",
    " The mud flap of the trailer fell on the road.",
    " Not leaving a sufficient distance, rear end collision.",
]

OUTCOMES = [
    " Material damage only.",
    " Material damage to both vehicles, estimated by the expert.",
    " Material damage and minor injuries.",
    " One injury, transferred to the hospital.",
    " Violation failure of the driver, per the expert report.",
    " Medical report attached to the file.",
    " No injuries; the vehicle was towed.",
]

CAUSES = [
    " Cause: sudden change of lane without a signal.",
    " Cause: tire explosion due to worn tires.",
    " Cause: driving in a reckless manner.",
    " Cause: oil bleeding on the surface.",
    " Cause: failure to follow traffic rules.",
    " Cause: vehicle failure in the brakes.",
    " Cause: concrete debris from road works.",
    " Cause: health condition of the driver.",
    "",
    "",
]


def build(n=100, seed=SEED):
    rng = Xoshiro256(seed)
    pick = lambda seq: seq[rng.below(len(seq))]  # noqa: E731
    rows = []
    for i in range(n):
        route = pick(ROUTES)
        text = pick(OPENINGS).format(route=route) + pick(EVENTS) + pick(OUTCOMES) + pick(CAUSES)
        rows.append({"id": f"N{i:03d}", "route": route, "narrative": text})
    return rows


def main(path):
    rows = build()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["id", "route", "narrative"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src/crashmine/data/synthetic_crash_narratives.csv"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
