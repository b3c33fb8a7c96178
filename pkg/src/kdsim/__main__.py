"""Allow ``python -m kdsim`` as an alias for the ``kdsim`` script."""

import sys

from .cli import main

sys.exit(main())
