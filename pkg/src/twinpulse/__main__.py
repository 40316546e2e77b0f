import sys

from twinpulse.cli import main

sys.exit(main())
