from homgeo.cli import main
import sys

sys.exit(main())
