"""Writes the three-depot, sixteen-ATM example instance and its plan."""
import json
import math
from pathlib import Path

HERE = Path(__file__).parent

depots = {"01": (0, 0), "02": (30, 0), "03": (15, 25)}
# Grouping: depot 01 serves 1,2,3,4,5,11; depot 02 serves 6,8,12,16;
# depot 03 serves 7,9,10,13,14,15.
atms = {
    1: (6, 0), 2: (0, 8), 3: (-3, 4), 4: (-4, -3), 5: (6, 8), 11: (3, -5),
    6: (20, -2), 8: (27, 5), 12: (33, -4), 16: (28, -6),
    7: (10, 22), 9: (13, 30), 10: (18, 28), 13: (20, 22), 14: (15, 18), 15: (11, 27),
}
service = {1: 5, 2: 10, 3: 5, 5: 5}
opens = {2: 605}
M = 1_000_000

nodes = list(depots.values()) + [atms[k] for k in sorted(atms)]
dist = [[round(math.dist(a, b), 1) for b in nodes] for a in nodes]

instance = {
    "schema_version": 1,
    "note": ("ATM 6 is listed under both depot 01 and depot 02 in the source example; "
             "a single depot per ATM is required, so it is placed nearest depot 02 only. "
             "ATM 16 is not listed in any group and is placed with depot 02."),
    "periods": 2,
    "interest_rate_annual": 0.05,
    "depot_window": [480, 1080],
    "max_route_time_min": 360,
    "depots": [{"id": k, "position": {"x_km": x, "y_km": y}} for k, (x, y) in depots.items()],
    "atms": [
        {
            "id": str(k),
            "initial_balance": 100 * M,
            "service_window": [opens.get(k, 480), 1020],
            "service_time_min": service.get(k, 10),
            "forecast_withdrawals": [50 * M, 30 * M] if k == 2 else [30 * M, 30 * M],
            "position": {"x_km": atms[k][0], "y_km": atms[k][1]},
        }
        for k in sorted(atms)
    ],
    "vehicles": [
        {"id": "1", "home_depot": "01", "capacity": 1000 * M, "cost_per_km": 25000, "speed_kmh": 60},
        {"id": "2", "home_depot": "01", "capacity": 1000 * M, "cost_per_km": 25000, "speed_kmh": 60},
        {"id": "3", "home_depot": "02", "capacity": 1000 * M, "cost_per_km": 25000, "speed_kmh": 60},
        {"id": "4", "home_depot": "03", "capacity": 1000 * M, "cost_per_km": 25000, "speed_kmh": 60},
    ],
    "distance_km": dist,
}

# Vehicle 1 leaves at 9h30, reaches ATM 2 at 10h00 and starts service at
# 10h05 when the ATM opens.
plan = {
    "schema_version": 1,
    "routes": {
        "1": {"1": ["01", "1", "5", "2", "3", "01"]},
        "4": {"1": ["03", "7", "9", "10", "03"]},
    },
    "deposits": {
        "1": [80 * M, 0], "5": [80 * M, 0], "2": [100 * M, 0], "3": [80 * M, 0],
        "7": [80 * M, 0], "9": [80 * M, 0], "10": [80 * M, 0],
    },
    "timing": {
        "1": {"1": {"departure": 570,
                    "arrival": [576, 589, 600, 620],
                    "service_start": [576, 589, 605, 620]}},
    },
}

(HERE / "two_depot_instance.json").write_text(json.dumps(instance, indent=1) + "\n")
(HERE / "two_depot_plan.json").write_text(json.dumps(plan, indent=1) + "\n")
