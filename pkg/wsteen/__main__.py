import sys

from wsteen.main import main

sys.exit(main())
