"""Regenerate the replay fixtures used by the pipeline and CLI tests.

Two sensors stream once per second for 1000 seconds: a motor temperature
bound to a named multiplier slot on the DC motor (a custom part) and a
board temperature bound to the capacitor bank's temperature factor.  Both
curves stay at multiplier >= 1 over the reading range, so the sensor-based
hazard can never drop below nominal in the replay.
"""

import json
import math
import os

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

BINDINGS = {
    "schema_version": 1,
    "bindings": [
        {
            "sensor_id": "motor_temp",
            "target_path": "Mobility/DC Motor/DC Motor",
            "target_factor": "thermal_stress",
            "curve": [[20.0, 1.0], [80.0, 2.5]],
        },
        {
            "sensor_id": "board_temp",
            "target_path": "Power/Battery Control Board/Capacitor",
            "target_factor": "piT",
            "curve": [[20.0, 1.0], [60.0, 2.0]],
        },
    ],
}


def main():
    with open(os.path.join(FIXTURES, "bindings.json"), "w") as fh:
        json.dump(BINDINGS, fh, indent=2)
        fh.write("\n")

    lines = []
    for k in range(1000):
        t = float(k)
        motor = 50.0 + 30.0 * math.sin(k / 40.0)     # 20..80 C
        board = 40.0 + 20.0 * math.sin(k / 25.0 + 1) # 20..60 C
        lines.append(json.dumps({"timestamp": t, "sensor_id": "motor_temp",
                                 "value": round(motor, 3), "unit": "C"}))
        lines.append(json.dumps({"timestamp": t, "sensor_id": "board_temp",
                                 "value": round(board, 3), "unit": "C"}))
    with open(os.path.join(FIXTURES, "readings.log"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} readings and {len(BINDINGS['bindings'])} bindings")


if __name__ == "__main__":
    main()
