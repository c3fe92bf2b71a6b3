import sys

from locout.cli import main

sys.exit(main())
