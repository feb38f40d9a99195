import sys
from pathlib import Path

# Test-only modules (dense oracle, helpers) live next to the tests.
sys.path.insert(0, str(Path(__file__).parent))
