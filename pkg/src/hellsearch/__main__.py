import sys

from hellsearch.cli import main

sys.exit(main())
