from lfoc.cli import main

raise SystemExit(main())
