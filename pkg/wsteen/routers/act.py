from wsteen.models.milnor_dual import Side, SteenrodOp
from wsteen.routers import CommandResult, CommandRouter

router = CommandRouter("act", help="Apply Sq1 or Sq2 from the left or the right")
router.argument("--op", required=True, choices=[op.value for op in SteenrodOp])
router.argument("--side", required=True, choices=[side.value for side in Side])
router.argument("--expr", required=True, help="Element, e.g. 't0^2 + xb2'")
router.argument("--hw", action="store_true", help="Expand the input in H F2_** H_W Z first")


@router.command
def act(service, args) -> CommandResult:
    payload = service.act(args.field, args.op, args.side, args.expr, hw=args.hw)
    return CommandResult(payload, "act.txt.j2")
