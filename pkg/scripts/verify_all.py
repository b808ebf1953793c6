"""
Run the full acceptance suite and keep one report per module under results/.
"""
import subprocess
import sys
from pathlib import Path

COMMANDS = ("constants", "profile", "rayleigh", "fracops", "lemmas")


def main():
    """Run every module command in full mode, then the aggregate in quick mode."""
    orders = sys.argv[1] if len(sys.argv) > 1 else "0.1:0.9:9"
    root = Path(__file__).resolve().parent.parent
    results = root / "results"
    results.mkdir(exist_ok=True)
    print(f"🔬 hardy-verify acceptance run, s = {orders}")
    print("=" * 60)

    failures = []
    try:
        for command in COMMANDS:
            out = results / f"{command}.json"
            code = subprocess.run([
                sys.executable, "-m", "apps.cli.main", command,
                "--s", orders,
                "--format", "json",
                "--out", str(out),
            ], cwd=root).returncode
            print(f"{'✅' if code == 0 else '❌'} {command} -> {out.name} (exit {code})")
            if code != 0:
                failures.append(command)

        code = subprocess.run([sys.executable, "-m", "apps.cli.main", "verify-all", "--s", "0.5", "--quick",
                               "--out", str(results / "verify_all_quick.json")], cwd=root).returncode
        print(f"{'✅' if code == 0 else '❌'} verify-all --quick (exit {code})")
        if code != 0:
            failures.append("verify-all")
    except KeyboardInterrupt:
        print("\n🛑 Acceptance run stopped")
        sys.exit(130)

    print("=" * 60)
    if failures:
        print(f"Failed: {', '.join(failures)}")
        sys.exit(1)
    print("All acceptance checks passed")


if __name__ == "__main__":
    main()
