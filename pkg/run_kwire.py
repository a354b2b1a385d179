#!/usr/bin/env python3
"""Quantum Wire Transport"""
import sys
import os

# Add project root to path so imports work
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

BANNER = """
╔═══════════════════════════════════════════════════════════╗
║        Quantum Wire Nonequilibrium Correlations           ║
╚═══════════════════════════════════════════════════════════╝
"""


def main():
    if len(sys.argv) < 2:
        print(BANNER)
        print("Usage:")
        print("  python run_kwire.py sweep-bias --i 4 --j 8 --ev 0:2:0.05   # C_ij against eV")
        print("  python run_kwire.py profile --mode distance --i 4 --ev 1.6 # C_{i,j} over j")
        print("  python run_kwire.py profile --mode position --d 4 --ev 1   # C_{i,i+d} over i")
        print("  python run_kwire.py iv --ev 0:2:0.1                        # current against eV")
        print("  python run_kwire.py iv --ev=-2:2:0.1                       # negative start needs the = form")
        print("  python run_kwire.py period --scan L --values 20,40         # zero crossing against L")
        print("  python run_kwire.py validate                               # oracle and symmetry checks")
        print("  python run_kwire.py analyze c48.csv                        # summarize a sweep CSV")
        sys.exit(1)

    from kwire.cli import main as cli_main
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
