import numpy as np

from agt.generators import (
    all_selection_functions,
    all_short_lenses,
    grid_object,
    random_game,
    random_metric_space,
    random_short_lens,
    short_backward_rows,
    singleton_strategy_game,
)
from agt.lens import is_short_lens
from agt.metric import validate_metric


def test_random_metric_spaces_are_valid():
    for seed in range(60):
        space = random_metric_space(np.random.default_rng(seed))
        assert validate_metric(space) is None


def test_all_selection_functions_distinct_and_complete():
    obj = grid_object(2, 2)
    pool = all_selection_functions(obj)
    assert len(pool) == 2 ** (4 * 2)
    assert len({s.table.tobytes() for s in pool}) == len(pool)


def test_short_rows_are_exactly_the_short_maps():
    a, b = grid_object(1, 3), grid_object(1, 3)
    rows = short_backward_rows(a.bwd, b.bwd)
    assert len(rows) == 17


def test_generated_lenses_are_short(rng):
    src, tgt = grid_object(2, 3), grid_object(2, 2)
    for lens in all_short_lenses(src, tgt):
        assert is_short_lens(lens) is None
    for _ in range(20):
        assert is_short_lens(random_short_lens(src, tgt, rng)) is None


def test_random_games_validate(rng):
    dom, cod = grid_object(2, 2), grid_object(2, 3)
    for _ in range(10):
        game = random_game(dom, cod, 2, rng)
        assert len(game.strategies) == 2


def test_singleton_game_covers_every_context():
    dom, cod = grid_object(2, 2), grid_object(2, 2)
    lens = all_short_lenses(dom, cod)[0]
    game = singleton_strategy_game(dom, cod, lens)
    assert len(game.strategies) == dom.fwd.n * cod.bwd.n**cod.fwd.n
    stacked = np.stack(game.eq).sum(axis=0)
    assert (stacked == 1).all()
