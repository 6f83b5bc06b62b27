import sys

from isentropes.cli import main

sys.exit(main())
