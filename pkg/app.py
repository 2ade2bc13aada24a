"""
App entry point for the Casimir pressure tool.

    python app.py compute run.cfg
    python app.py sweep run.cfg --csv out.csv
    python app.py validate
    python app.py material run.cfg --k 0 --k 0.05
"""

from ui.cli import run


if __name__ == "__main__":
    run()
