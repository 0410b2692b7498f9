"""
T-mesh spline toolkit - command-line entry point

"""
import sys

from cli.app import configure_logging, run_command

configure_logging()


if __name__ == "__main__":
    sys.exit(run_command(sys.argv[1:]))
