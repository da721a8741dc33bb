#!/usr/bin/env python

# Run the command line from a checkout without installing:
# $ python -m sqz_timing sql --preset paper
from __future__ import annotations

import sys

if __package__ in (None, ''):
    import os.path

    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.realpath(__file__))))

import sqz_timing

if __name__ == '__main__':
    sqz_timing.main()
