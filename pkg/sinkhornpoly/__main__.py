# __main__.py

from sinkhornpoly.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
