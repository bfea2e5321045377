"""Main script to run the hibicone command line."""
import sys

from hibicone.cli import main

if __name__ == "__main__":
    sys.exit(main())
