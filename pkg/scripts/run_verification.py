#!/usr/bin/env python3
"""Run the verification battery from a source checkout.

Thin wrapper over the installed ``cotangent-kahler`` entry point so the
default run is one command away while developing:

    python3 scripts/run_verification.py --report report.json

Pass ``--help`` for the full flag list.
"""

from cotangent_kahler.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
