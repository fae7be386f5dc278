import sys

from qkgsec.cli import main

sys.exit(main())
