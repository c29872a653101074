"""
Main Entry Point for the Toric Semi-Integral Points Toolkit

Author: Mohammed Ismail AbdElmageid
"""
import sys
from cli.app import main

if __name__ == "__main__":
    sys.exit(main())
