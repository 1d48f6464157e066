import sys

from poolz._cli import main

sys.exit(main())
