from sftcalc.main import main

raise SystemExit(main())
