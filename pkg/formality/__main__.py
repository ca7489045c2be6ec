"""Allow `python -m formality`."""

from .main import main

main()
