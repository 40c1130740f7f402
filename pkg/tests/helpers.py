"""Fixture games shared by the test modules."""

from spgames.game import SPGame, StrategyProfile

# filled by test_acceptance, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def fix_a() -> SPGame:
    """s=0 (player 1), a=1 (player 2), t=2.

    e1=(s,a) (1,1); e2=(a,t) (2,3); e3=(s,t) (10,10); e4=(a,s) (1,1),
    stored as edge ids 0..3.
    """
    return SPGame.build(
        2,
        [1, 2, None],
        [(0, 1, (1, 1)), (1, 2, (2, 3)), (0, 2, (10, 10)), (1, 0, (1, 1))],
    )


def fix_b() -> SPGame:
    """e1=(s,a), e2=(a,s), e3=(a,t), all costs (1,1)."""
    return SPGame.build(2, [1, 2, None], [(0, 1, (1, 1)), (1, 0, (1, 1)), (1, 2, (1, 1))])


def prof(game: SPGame, *named: int) -> StrategyProfile:
    """Profile from 1-based edge names (e1 -> id 0)."""
    return StrategyProfile.from_edges(game, [e - 1 for e in named])
