from wsteen.routers import CommandResult, CommandRouter

router = CommandRouter("pair", help="Build an element of the pullback pair model")
router.argument("--generator", help="tau0, s, t<j>, c, c1, t or t1")
router.argument("--index-set", default="", help="Index set such as {2,3}")
router.argument("--a", help="H F2_** H_W Z component as an expression")
router.argument("--torsion", help="Torsion component of the K^W side as an expression")


@router.command
def pair(service, args) -> CommandResult:
    payload = service.pair(
        args.field,
        generator=args.generator,
        index_set=args.index_set,
        a=args.a,
        torsion=args.torsion,
    )
    return CommandResult(payload, "pair.txt.j2")
