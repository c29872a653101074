"""
Project Verification Script
Checks imports, configuration, shipped fans and a few known values

Author: Mohammed Ismail AbdElmageid
"""
import sys
import json
import os
from pathlib import Path

# Add project root to Python path
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(script_dir)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from cli.console import print_error, print_header, print_success, print_warning


def check_file_exists(filepath, description):
    """Check if file exists"""
    if os.path.exists(os.path.join(project_root, filepath)):
        print_success(f"{description}: {filepath}")
        return True
    else:
        print_error(f"{description} missing: {filepath}")
        return False


def check_project_structure():
    """Check project file structure"""
    print_header("Checking Project Structure")

    required_files = [
        ("main.py", "Main entry point"),
        ("cli/app.py", "Command-line front end"),
        ("core/fan.py", "Fan model"),
        ("core/points.py", "Points and multiplicities"),
        ("core/heights.py", "Heights"),
        ("series/fan_functions.py", "Fan functions"),
        ("series/densities.py", "Densities"),
        ("series/constants.py", "Predicted constant"),
        ("counting/count_manager.py", "Count manager"),
        ("counting/fitting.py", "Fitting"),
        ("config/config.json", "Configuration"),
        ("requirements.txt", "Dependencies"),
    ]

    all_ok = True
    for filepath, description in required_files:
        if not check_file_exists(filepath, description):
            all_ok = False
    return all_ok


def check_imports():
    """Check if all required packages can be imported"""
    print_header("Checking Python Imports")

    modules = ["numpy", "scipy", "sympy", "mpmath"]
    all_ok = True
    for module_name in modules:
        try:
            module = __import__(module_name)
            print_success(f"{module_name} {getattr(module, '__version__', '')} imported successfully")
        except ImportError as e:
            print_error(f"{module_name} not found: {e}")
            all_ok = False
    return all_ok


def check_config():
    """Check configuration file against ToolkitConfig"""
    print_header("Checking Configuration")

    config_path = os.path.join(project_root, "config", "config.json")
    if not check_file_exists(os.path.join("config", "config.json"), "Config file"):
        return False

    try:
        from core.config import ToolkitConfig, load_config
        from dataclasses import fields

        with open(config_path, "r") as f:
            raw = json.load(f)
        known = {f.name for f in fields(ToolkitConfig)}
        for key in raw:
            if key not in known:
                print_warning(f"Unknown config key '{key}'")
        config = load_config(config_path)
        print_success(f"workers={config.workers}, primes_cutoff={config.primes_cutoff}, "
                      f"precision_dps={config.precision_dps}")
        return True
    except json.JSONDecodeError as e:
        print_error(f"Invalid JSON in config.json: {e}")
        return False
    except Exception as e:
        print_error(f"Error reading config.json: {e}")
        return False


def check_fan_files():
    """Parse every shipped .fan file and validate it"""
    print_header("Checking Shipped Fans")

    from core.fan import is_complete, is_regular, validate_fan
    from core.fan_file import read_fan_file

    all_ok = True
    for path in sorted(Path(project_root, "fans").glob("*.fan")):
        try:
            fan, weights = read_fan_file(path)
        except Exception as e:
            print_error(f"{path.name}: {e}")
            all_ok = False
            continue
        report = validate_fan(fan)
        if report.ok and is_regular(fan) and is_complete(fan):
            label = f", m=({weights.label()})" if weights else ""
            print_success(f"{path.name}: d={fan.dim}, {fan.ray_count} rays{label}")
        else:
            print_error(f"{path.name}: not a valid complete regular fan")
            all_ok = False
    return all_ok


def check_known_values():
    """Spot-check heights, Q and counts with hand-computed values"""
    print_header("Checking Known Values")

    try:
        from core.config import ToolkitConfig
        from core.fan import OrbifoldWeights, PLFunction
        from core.heights import HeightPower, global_height
        from core.library import library_fan
        from core.points import Variant, parse_point
        from counting.count_manager import count
        from series.fan_functions import InvariantConeSet, q_polynomial

        p1 = library_fan("P1")
        p2 = library_fan("P2")
        m = OrbifoldWeights((2, 2))

        checks = [
            ("H(2,3) = 27 on P2",
             global_height(p2, PLFunction.anticanonical(p2), parse_point("2,3")).exact == HeightPower(27)),
            ("H(4/9) = 9 on P1, m=(2,2)",
             global_height(p1, PLFunction.log_anticanonical(p1, m), parse_point("4/9")).exact == HeightPower(9)),
            ("Q has 6 monomials on P1, m=(2,2)",
             len(q_polynomial(InvariantConeSet.from_fan(p1), m, "campana").terms()) == 6),
            ("N(10) = 22 on P1, m=(2,2), Campana",
             count(p1, m, Variant.CAMPANA, 10, ToolkitConfig(workers=1)).final_count == 22),
        ]
        all_ok = True
        for description, ok in checks:
            if ok:
                print_success(description)
            else:
                print_error(description)
                all_ok = False
        return all_ok
    except Exception as e:
        print_error(f"Known value check failed: {e}")
        import traceback
        traceback.print_exc()
        return False


def main():
    """Run all verification checks"""
    print_header("Toric Semi-Integral Points Toolkit - Project Verification")

    results = []
    results.append(("Project Structure", check_project_structure()))
    results.append(("Python Imports", check_imports()))
    results.append(("Configuration", check_config()))
    results.append(("Shipped Fans", check_fan_files()))
    results.append(("Known Values", check_known_values()))

    print_header("Verification Summary")

    all_passed = True
    for check_name, result in results:
        if result:
            print_success(f"{check_name}: PASSED")
        else:
            print_error(f"{check_name}: FAILED")
            all_passed = False

    print("\n" + "=" * 60)
    if all_passed:
        print("[OK] ALL CHECKS PASSED - Project is ready!")
        print("\nNext steps:")
        print("1. Run the tests: python3 -m pytest tests/")
        print("2. Try a count: python3 main.py count --fan P1 --weights 2,2 --bound 1e5")
        print("3. Long runs: python3 scripts/run_acceptance.py")
    else:
        print("✗ SOME CHECKS FAILED - Please fix the issues above")
        sys.exit(1)
    print("=" * 60 + "\n")


if __name__ == "__main__":
    main()
