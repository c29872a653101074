"""
Console Output Helpers

Author: Mohammed Ismail AbdElmageid
"""
import sys


def print_header(text, stream=None):
    """Print formatted header"""
    stream = stream or sys.stdout
    print(f"\n{'=' * 60}", file=stream)
    print(f"  {text}", file=stream)
    print(f"{'=' * 60}\n", file=stream)


def print_success(text, stream=None):
    print(f"[OK] {text}", file=stream or sys.stdout)


def print_error(text, stream=None):
    print(f"✗ {text}", file=stream or sys.stderr)


def print_warning(text, stream=None):
    print(f"⚠ {text}", file=stream or sys.stdout)
