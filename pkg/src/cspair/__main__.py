import sys

from cspair.cli import main

sys.exit(main())
