import sys

from maasslab.api.cli import main

sys.exit(main())
