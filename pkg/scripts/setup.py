#!/usr/bin/env python3
"""
This script helps you set up hardy-verify step by step.
- basically a shortcut for the QUICKSTART.md file.
"""

import os
import platform
import shutil
import subprocess
import sys
from pathlib import Path


class Colors:
    """ANSI color codes for terminal output."""
    GREEN = '\033[92m'
    RED = '\033[91m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    WHITE = '\033[97m'
    BOLD = '\033[1m'
    END = '\033[0m'


def print_colored(message, color=Colors.WHITE):
    """Print colored message to terminal."""
    print(f"{color}{message}{Colors.END}")


def print_header(title):
    """Print a formatted header."""
    print_colored("\n" + "=" * 60, Colors.CYAN)
    print_colored(f"  {title}", Colors.BOLD + Colors.CYAN)
    print_colored("=" * 60, Colors.CYAN)


def print_step(step_num, description):
    """Print a step description."""
    print_colored(f"\n{step_num}. {description}", Colors.BOLD + Colors.BLUE)


def print_success(message):
    print_colored(f"✅ {message}", Colors.GREEN)


def print_warning(message):
    print_colored(f"⚠️  {message}", Colors.YELLOW)


def print_error(message):
    print_colored(f"❌ {message}", Colors.RED)


def run_command(command, check=True, shell=True):
    """Run a command and return (success, stdout, stderr)."""
    try:
        result = subprocess.run(command, shell=shell, check=check, capture_output=True, text=True)
        return result.returncode == 0, result.stdout, result.stderr
    except subprocess.CalledProcessError as e:
        return False, e.stdout, e.stderr


def check_python_version():
    """Check if Python version is 3.11+."""
    print_step(1, "Checking Python version")
    version = sys.version_info
    if version.major == 3 and version.minor >= 11:
        print_success(f"Python {version.major}.{version.minor}.{version.micro} is supported")
        return True
    print_error(f"Python {version.major}.{version.minor}.{version.micro} is not supported")
    print_error("Please install Python 3.11 or higher")
    return False


def pip_command():
    if platform.system().lower() == "windows":
        return "venv\\Scripts\\pip"
    return "venv/bin/pip"


def python_command():
    if platform.system().lower() == "windows":
        return "venv\\Scripts\\python"
    return "venv/bin/python"


def setup_virtual_environment():
    """Set up Python virtual environment."""
    print_step(2, "Setting up virtual environment")
    if os.path.exists("venv"):
        print_success("Virtual environment already exists")
        return True
    success, _, stderr = run_command(f"{sys.executable} -m venv venv")
    if success:
        print_success("Virtual environment created successfully")
        return True
    print_error(f"Failed to create virtual environment: {stderr}")
    return False


def install_dependencies():
    """Install Python dependencies."""
    print_step(3, "Installing Python dependencies")
    success, _, stderr = run_command(f"{pip_command()} install --upgrade pip")
    if not success:
        print_error(f"Failed to upgrade pip: {stderr}")
        return False
    success, _, stderr = run_command(f"{pip_command()} install -r requirements.txt")
    if success:
        print_success("Dependencies installed successfully")
        return True
    print_error(f"Failed to install dependencies: {stderr}")
    return False


def setup_environment_file():
    """Set up .env configuration file."""
    print_step(4, "Setting up environment configuration")
    if os.path.exists(".env"):
        print_success(".env file already exists")
        return True
    if os.path.exists("config/env.example"):
        shutil.copy("config/env.example", ".env")
        print_success("Created .env file from template (HARDY_* settings)")
        return True
    print_error("config/env.example not found")
    return False


def smoke_test():
    """Run the constants command as a quick end-to-end check."""
    print_step(5, "Running a smoke test")
    success, stdout, stderr = run_command(
        f"{python_command()} -m apps.cli.main constants --s 0.5 --format csv", check=False)
    if success and "0.63661977236758" in stdout:
        print_success("constants --s 0.5 reproduces dbar = 2/pi")
        return True
    print_error(f"Smoke test failed: {stderr.strip().splitlines()[-1] if stderr.strip() else 'no output'}")
    return False


def final_instructions():
    """Display final setup instructions."""
    print_header("Setup Complete!")
    print_colored("\nNext steps:", Colors.CYAN)
    print_colored("1. Activate the environment: source venv/bin/activate", Colors.WHITE)
    print_colored("2. Run the tests: pytest -m 'not slow'", Colors.WHITE)
    print_colored("3. Run the quick suite: python -m apps.cli.main verify-all --s 0.5 --quick", Colors.WHITE)
    print_colored("4. Full acceptance run: python scripts/verify_all.py", Colors.WHITE)
    print_colored("\nRead QUICKSTART.md for every command and flag.", Colors.CYAN)


def main():
    """Main setup function."""
    print_header("hardy-verify Setup")
    os.chdir(Path(__file__).parent.parent)
    print_colored(f"Working directory: {os.getcwd()}", Colors.CYAN)

    steps = [check_python_version, setup_virtual_environment, install_dependencies,
             setup_environment_file, smoke_test]
    passed = 0
    for step in steps:
        if not step():
            print_warning("Stopping here; fix the step above and run the script again.")
            break
        passed += 1

    print_header("Setup Results")
    print_colored(f"Completed: {passed}/{len(steps)} steps", Colors.CYAN)
    if passed == len(steps):
        final_instructions()
    else:
        sys.exit(1)


if __name__ == "__main__":
    main()
