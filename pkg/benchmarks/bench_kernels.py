"""Compare the pure-Python and compiled kernels on the two hot paths.

Run as ``python benchmarks/bench_kernels.py``.  Uses the same inputs for
both implementations: a backtracking-heavy labeling search (built from the
crooked-walk fixture's final-case scaffold) and long crooked-span sweeps.
"""

import pathlib
import random
import sys
import timeit

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from plselect._kernels import pure  # noqa: E402

try:
    from plselect._kernels import _fast as compiled
except ImportError:
    compiled = None


def labeling_instance():
    """The fixture's stage-1 search, lowered to raw kernel arguments."""
    from plselect.crochet import build_scaffold, _canonical_cell_order, _as_interior
    from plselect.poly import sort_roots_lattice
    from plselect.problem import load_problem

    fixture = pathlib.Path(__file__).resolve().parent.parent / (
        "tests/fixtures/crooked_walk.json"
    )
    pf = load_problem(fixture)
    ps = sort_roots_lattice(pf.poly)
    s = build_scaffold(ps, pf.u, pf.v)[0]
    order = _canonical_cell_order(ps.domain)
    pos = {cell: t for t, cell in enumerate(order)}
    a_cells = set(s.A.cells())
    b_cells = set(s.B.cells())
    ui = set(_as_interior(s.C).cells())
    vi = set(_as_interior(s.D).cells())
    allowed, kinds, ends = [], [], []
    for cell in order:
        kind, idx = cell
        kinds.append(0 if kind == "v" else 1)
        if kind == "e":
            a, b = ps.domain.edges[idx]
            ends.append((pos[("v", a)], pos[("v", b)]))
        else:
            ends.append((0, 0))
        bits = 0
        for m in range(1, 8):
            if m & 5 == 5:
                continue
            if cell in a_cells and not m & 1:
                continue
            if cell in b_cells and not m & 4:
                continue
            if m & 3 == 3 and cell not in vi:
                continue
            if m & 6 == 6 and cell not in ui:
                continue
            bits |= 1 << m
        allowed.append(bits)
    return allowed, kinds, ends


def walk_instance():
    rng = random.Random(7)
    return [rng.randint(1, 9) for _ in range(4000)]


def bench(name, fn, number):
    secs = timeit.timeit(fn, number=number)
    per = secs / number * 1e6
    print(f"{name:42s} {per:10.1f} us/call   ({number} calls, {secs:.3f}s total)")
    return per


def main():
    allowed, kinds, ends = labeling_instance()
    seq = walk_instance()

    print(f"cover_search on {len(allowed)} cells, crooked sweep on {len(seq)} entries\n")
    pure_a = bench("cover_search      pure", lambda: pure.cover_search(allowed, kinds, ends), 2000)
    # b_val = 10 never occurs, so every call sweeps the full sequence
    pure_b = bench(
        "crooked sweep     pure",
        lambda: pure.crooked_span_violation(seq, 1, 10, 4, 6),
        2000,
    )
    if compiled is None:
        print("\ncompiled extension not built; run pip install -e . first")
        return
    fast_a = bench(
        "cover_search      compiled",
        lambda: compiled.cover_search(allowed, kinds, ends),
        2000,
    )
    fast_b = bench(
        "crooked sweep     compiled",
        lambda: compiled.crooked_span_violation(seq, 1, 10, 4, 6),
        2000,
    )
    print(f"\nspeedup: cover_search x{pure_a / fast_a:.1f}, crooked sweep x{pure_b / fast_b:.1f}")


if __name__ == "__main__":
    main()
