import pathlib
import sys

# allow running the suite from a fresh checkout without an install
sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))
