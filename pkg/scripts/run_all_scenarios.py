#!/usr/bin/env python3
"""Run every scenario in scenarios/ through the CLI and summarize exit codes."""

import pathlib
import subprocess
import sys

COMMANDS = {
    "klauder_brackets.json": "brackets",
    "klauder_orbit.json": "evolve",
    "gauge_orbit.json": "evolve",
    "ramped_k_orbit.json": "evolve",
    "particle_flight.json": "evolve",
    "quantum_sweep.json": "quantum",
    "maxwell_l2.json": "maxwell",
}


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    scenario_dir = root / "scenarios"
    failures = 0
    for name, command in COMMANDS.items():
        config = scenario_dir / name
        result = subprocess.run(
            [sys.executable, "-m", "diracmech", command, "--config", str(config)],
            capture_output=True, text=True, cwd=root)
        status = "ok" if result.returncode == 0 else f"exit {result.returncode}"
        print(f"{command:10} {name:28} {status}")
        if result.returncode != 0:
            failures += 1
            sys.stderr.write(result.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
