import sys

from sturmlab.cli import main


if __name__ == "__main__":
    sys.exit(main())
