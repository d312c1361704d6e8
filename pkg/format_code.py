"""
Format and lint the latqd sources.

Runs black, then ruff with fixes, over src/ and tests/. With --check nothing
is rewritten and a nonzero exit reports style drift.

Usage: python format_code.py [--check]
"""

import subprocess
import sys

TARGETS = ["src/", "tests/"]


def run_command(cmd):
    print(f"Running: {' '.join(cmd)}")
    return subprocess.run(cmd).returncode == 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    check = "--check" in argv

    steps = [
        ("black", ["black", "--check", *TARGETS] if check else ["black", *TARGETS]),
        ("ruff", ["ruff", "check", *TARGETS] if check else ["ruff", "check", "--fix", *TARGETS]),
    ]
    failed = [name for name, cmd in steps if not run_command(cmd)]

    if failed:
        print(f"\n{', '.join(failed)} reported problems. Check output above.")
        return 1
    print("\nSources are clean." if check else "\nFormatting complete. Review the diff.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
