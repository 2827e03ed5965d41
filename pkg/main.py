#!/usr/bin/env python3
"""negmine entry point: python main.py mine data.basket --minsprt 0.3"""
import sys

from cli import main

if __name__ == '__main__':
    sys.exit(main())
