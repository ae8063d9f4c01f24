# scripts/run_formality.py
import argparse
import sys
from pathlib import Path

# Add the project root to the Python path to ensure imports work correctly
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT / "src"))

from bigraded_formality import corpus
from bigraded_formality.errors import FormalityError
from bigraded_formality.pipeline import run_corpus
from dotenv import load_dotenv

# Load FORMALITY_* settings from a .env file located in the project root
load_dotenv(dotenv_path=PROJECT_ROOT / ".env")


def main():
    """
    Runs corpus entries with their default commands and prints the reports.

    With no names every entry is run in corpus order.
    """
    parser = argparse.ArgumentParser(description="Bigraded formality corpus runner")
    parser.add_argument("names", nargs="*", help="Corpus entries to run (default: all).")
    parser.add_argument("--summary", action="store_true", help="Print one line per entry instead of reports.")
    args = parser.parse_args()

    for name in args.names or corpus.names():
        print(f"Running corpus entry: {name}...")
        try:
            report = run_corpus(name)
        except FormalityError as e:
            print(f"{name}: {type(e).__name__}: {e}")
            continue
        except Exception as e:
            print(f"An unexpected error occurred on {name}: {e}")
            continue

        if args.summary:
            print(f"{name}: {report.command} verdict={report.verdict} exit={report.exit_code}")
        else:
            print(report.model_dump_json(indent=2))


if __name__ == "__main__":
    main()
