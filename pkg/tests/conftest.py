import sys
from pathlib import Path

# make the shared reference helpers importable as a plain module
sys.path.insert(0, str(Path(__file__).parent))
