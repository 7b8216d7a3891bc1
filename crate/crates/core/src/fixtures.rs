//! Small named shift specifications used in docs, tests and the CLI corpus.

use crate::pattern::{Alphabet, FinitePattern, SftSpec, Symbol};

fn pattern(cells: &[([i64; 2], Symbol)]) -> FinitePattern {
    FinitePattern::new(2, cells.iter().map(|(c, s)| (c.to_vec(), *s))).expect("fixture pattern")
}

fn horizontal(a: Symbol, b: Symbol) -> FinitePattern {
    pattern(&[([0, 0], a), ([1, 0], b)])
}

fn vertical(a: Symbol, b: Symbol) -> FinitePattern {
    pattern(&[([0, 0], a), ([0, 1], b)])
}

fn spec(symbols: &[&str], forbidden: Vec<FinitePattern>) -> SftSpec {
    SftSpec::new(
        Alphabet::new(symbols.iter().copied()).expect("fixture alphabet"),
        2,
        forbidden,
    )
    .expect("fixture spec")
}

/// No two horizontally or vertically adjacent 1s over {0, 1}.
pub fn hard_square() -> SftSpec {
    spec(&["0", "1"], vec![horizontal(1, 1), vertical(1, 1)])
}

/// Forbids `aa` and `bb` along both axes over {a, b}.
pub fn checkerboard() -> SftSpec {
    spec(
        &["a", "b"],
        vec![
            horizontal(0, 0),
            horizontal(1, 1),
            vertical(0, 0),
            vertical(1, 1),
        ],
    )
}

/// Forbids horizontal 00, horizontal 01 and vertical 11; empty.
pub fn contradiction() -> SftSpec {
    spec(
        &["0", "1"],
        vec![horizontal(0, 0), horizontal(0, 1), vertical(1, 1)],
    )
}

/// Forbids both single cells over {0, 1}; empty.
pub fn forbid_all_cells() -> SftSpec {
    spec(
        &["0", "1"],
        vec![pattern(&[([0, 0], 0)]), pattern(&[([0, 0], 1)])],
    )
}

pub fn full_shift(symbols: &[&str]) -> SftSpec {
    spec(symbols, Vec::new())
}

/// A width-3 L-shaped pattern plus a vertical domino over {0, 1}.
pub fn l_shaped() -> SftSpec {
    spec(
        &["0", "1"],
        vec![
            pattern(&[([0, 0], 1), ([0, 1], 0), ([0, 2], 1), ([1, 0], 1)]),
            vertical(0, 0),
        ],
    )
}
