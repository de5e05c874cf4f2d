from weakzeno.cli import main

raise SystemExit(main())
