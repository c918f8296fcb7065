from wittlab.cli import main
import sys

sys.exit(main())
