"""Shared pytest setup: repo root on sys.path, deep recursion for the evaluator."""

import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
