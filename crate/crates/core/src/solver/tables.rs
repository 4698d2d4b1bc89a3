//! Published solution tables as structured fixtures.
//!
//! `ρ` entries are kept as expression strings (see [`crate::expr`]) so reports
//! can echo the exact surds. `δ` is a fraction of `2π`, written `(num, den)`.

/// One row: every `ρ` times every `δ` must revive at `n` for every `k`.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub ks: &'static [usize],
    pub n: u64,
    pub rhos: &'static [&'static str],
    pub deltas: &'static [(u64, u64)],
}

/// A row of the two-form table, with both generator families.
#[derive(Debug, Clone, Copy)]
pub struct TwoFormRow {
    pub ks: &'static [usize],
    pub n: u64,
    pub rho: &'static str,
    pub delta: (u64, u64),
    pub primed: &'static [(u64, u64)],
    pub double_primed: &'static [(u64, u64)],
}

pub const TABLE1_KS: &[usize] = &[2, 3, 4, 5, 7, 12];
pub const TABLE1_DELTAS: &[(u64, u64)] = &[(1, 2), (1, 3), (2, 5)];

/// Any `ρ` works at `δ = 0`; these are the sampled values.
pub const TABLE2_FREE_RHOS: &[&str] = &["0", "0.25", "0.37", "1/2", "2/3", "1"];

/// The seeded `k = 2` example: seed `2/5` at `δ = 2π·2/3`.
pub const TABLE2_SEEDED: TableRow = TableRow {
    ks: &[2],
    n: 30,
    rhos: &["(2/3)(1-sin(7pi/30))"],
    deltas: &[(2, 3)],
};
pub const TABLE2_SEED: (u64, u64) = (2, 5);
pub const TABLE2_SEEDED_GENERATORS: &[(u64, u64)] = &[(4, 15), (2, 5), (23, 30), (9, 10)];

const K36: &[usize] = &[3, 6];
const D3_ALL: &[(u64, u64)] = &[(0, 1), (1, 3), (2, 3)];
const D3_SHIFTED: &[(u64, u64)] = &[(1, 3), (2, 3)];
const D0: &[(u64, u64)] = &[(0, 1)];

pub const TABLE3: &[TableRow] = &[
    TableRow { ks: K36, n: 8, rhos: &["2/3"], deltas: D0 },
    TableRow { ks: K36, n: 10, rhos: &["(5-sqrt5)/6"], deltas: D0 },
    TableRow { ks: K36, n: 12, rhos: &["1/3"], deltas: D3_ALL },
    TableRow {
        ks: K36,
        n: 14,
        rhos: &["(2/3)(1-cos(2pi/7))", "(2/3)(1-cos(2pi*2/7))"],
        deltas: D0,
    },
    TableRow { ks: K36, n: 16, rhos: &["(2-sqrt2)/3"], deltas: D0 },
    TableRow {
        ks: K36,
        n: 18,
        rhos: &["(2/3)(1-cos(2pi/9))", "(2/3)(1-cos(2pi*2/9))"],
        deltas: D3_ALL,
    },
    TableRow { ks: K36, n: 20, rhos: &["(3-sqrt5)/6", "(3+sqrt5)/6"], deltas: D0 },
    TableRow {
        ks: K36,
        n: 22,
        rhos: &["(2/3)(1-cos(2pi/11))", "(2/3)(1-cos(2pi*2/11))", "(2/3)(1-cos(2pi*3/11))"],
        deltas: D0,
    },
    TableRow { ks: K36, n: 24, rhos: &["(2-sqrt3)/3"], deltas: D3_ALL },
    TableRow { ks: K36, n: 24, rhos: &["2/3"], deltas: D3_SHIFTED },
    TableRow {
        ks: K36,
        n: 26,
        rhos: &[
            "(2/3)(1-cos(2pi/13))",
            "(2/3)(1-cos(2pi*2/13))",
            "(2/3)(1-cos(2pi*3/13))",
            "(2/3)(1-cos(2pi*4/13))",
        ],
        deltas: D0,
    },
    TableRow {
        ks: K36,
        n: 28,
        rhos: &["(2/3)(1-cos(2pi/14))", "(2/3)(1-cos(2pi*3/14))"],
        deltas: D0,
    },
    TableRow {
        ks: K36,
        n: 30,
        rhos: &[
            "(7-sqrt5-sqrt(6(5-sqrt5)))/12",
            "(7+sqrt5-sqrt(6(5+sqrt5)))/12",
            "(7-sqrt5+sqrt(6(5-sqrt5)))/12",
        ],
        deltas: D3_ALL,
    },
    TableRow { ks: K36, n: 30, rhos: &["(5-sqrt5)/6"], deltas: D3_SHIFTED },
];

const K4: &[usize] = &[4];
const D4_REAL: &[(u64, u64)] = &[(0, 1), (1, 2)];
const D4_PI: &[(u64, u64)] = &[(1, 2)];
const D4_IMAG: &[(u64, u64)] = &[(1, 4), (3, 4)];

pub const TABLE4: &[TableRow] = &[
    TableRow { ks: K4, n: 6, rhos: &["3/4"], deltas: D0 },
    TableRow { ks: K4, n: 8, rhos: &["1/2"], deltas: D4_REAL },
    TableRow { ks: K4, n: 10, rhos: &["(5-sqrt5)/8", "(5+sqrt5)/8"], deltas: D0 },
    TableRow { ks: K4, n: 12, rhos: &["1/4"], deltas: D4_REAL },
    TableRow { ks: K4, n: 12, rhos: &["3/4"], deltas: D4_PI },
    TableRow { ks: K4, n: 12, rhos: &["(2-sqrt3)/2"], deltas: D4_IMAG },
    TableRow {
        ks: K4,
        n: 14,
        rhos: &["(1/2)(1-sin(3pi/14))", "(1/2)(1+sin(pi/14))", "(1/2)(1+cos(pi/7))"],
        deltas: D0,
    },
    TableRow { ks: K4, n: 16, rhos: &["(2-sqrt2)/4", "(2+sqrt2)/4"], deltas: D4_REAL },
    TableRow { ks: K4, n: 16, rhos: &["(2-sqrt2)/2"], deltas: D4_IMAG },
    TableRow {
        ks: K4,
        n: 18,
        rhos: &["(1/2)(1-cos(2pi/9))", "(1/2)(1-sin(pi/18))"],
        deltas: D0,
    },
    TableRow { ks: K4, n: 20, rhos: &["(3-sqrt5)/8", "(3+sqrt5)/8"], deltas: D4_REAL },
    TableRow { ks: K4, n: 20, rhos: &["(5-sqrt5)/8", "(5+sqrt5)/8"], deltas: D4_PI },
    TableRow {
        ks: K4,
        n: 20,
        rhos: &["(4-sqrt(10+2sqrt5))/4", "(4-sqrt(10-2sqrt5))/4"],
        deltas: D4_IMAG,
    },
    TableRow {
        ks: K4,
        n: 22,
        rhos: &[
            "(1/2)(1-cos(2pi/11))",
            "(1/2)(1-sin(3pi/22))",
            "(1/2)(1+sin(pi/22))",
            "(1/2)(1+sin(5pi/22))",
            "(1/2)(1+cos(pi/11))",
        ],
        deltas: D0,
    },
    TableRow { ks: K4, n: 24, rhos: &["(2-sqrt3)/4", "(2+sqrt3)/4"], deltas: D4_REAL },
    TableRow { ks: K4, n: 24, rhos: &["1/2"], deltas: D4_IMAG },
    TableRow {
        ks: K4,
        n: 26,
        rhos: &[
            "(1/2)(1-cos(2pi/13))",
            "(1/2)(1-sin(5pi/26))",
            "(1/2)(1-sin(pi/26))",
            "(1/2)(1+sin(3pi/26))",
            "(1/2)(1+cos(3pi/13))",
            "(1/2)(1+cos(pi/13))",
        ],
        deltas: D0,
    },
    TableRow {
        ks: K4,
        n: 28,
        rhos: &["(1/2)(1-cos(pi/7))", "(1/2)(1-sin(pi/14))", "(1/2)(1+sin(3pi/14))"],
        deltas: D4_REAL,
    },
    TableRow {
        ks: K4,
        n: 28,
        rhos: &["(1/2)(1+cos(pi/7))", "(1/2)(1+sin(pi/14))", "(1/2)(1-sin(3pi/14))"],
        deltas: D4_PI,
    },
    TableRow {
        ks: K4,
        n: 28,
        rhos: &["1-sin(pi/7)", "1-cos(pi/14)", "1-cos(3pi/14)"],
        deltas: D4_IMAG,
    },
    TableRow {
        ks: K4,
        n: 30,
        rhos: &[
            "(7-sqrt5-sqrt(6(5-sqrt5)))/16",
            "(7+sqrt5-sqrt(6(5+sqrt5)))/16",
            "(7-sqrt5+sqrt(6(5-sqrt5)))/16",
            "(7+sqrt5+sqrt(6(5+sqrt5)))/16",
        ],
        deltas: D0,
    },
];

const K510: &[usize] = &[5, 10];
const K8: &[usize] = &[8];
const RHO5_MINUS: &str = "(5-sqrt5)/10";
const RHO5_PLUS: &str = "(5+sqrt5)/10";

pub const TABLE5: &[TwoFormRow] = &[
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_MINUS,
        delta: (0, 1),
        primed: &[(1, 12), (5, 12), (7, 12), (11, 12)],
        double_primed: &[(1, 20), (9, 20), (11, 20), (19, 20)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_MINUS,
        delta: (1, 5),
        primed: &[(1, 60), (11, 60), (31, 60), (41, 60)],
        double_primed: &[(1, 20), (3, 20), (11, 20), (13, 20)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_MINUS,
        delta: (2, 5),
        primed: &[(7, 60), (17, 60), (37, 60), (47, 60)],
        double_primed: &[(3, 20), (1, 4), (13, 20), (3, 4)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_MINUS,
        delta: (3, 5),
        primed: &[(13, 60), (23, 60), (43, 60), (53, 60)],
        double_primed: &[(1, 4), (7, 20), (3, 4), (17, 20)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_MINUS,
        delta: (4, 5),
        primed: &[(19, 60), (29, 60), (49, 60), (59, 60)],
        double_primed: &[(7, 20), (9, 20), (17, 20), (19, 20)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_PLUS,
        delta: (0, 1),
        primed: &[(3, 20), (7, 20), (13, 20), (17, 20)],
        double_primed: &[(1, 12), (5, 12), (7, 12), (11, 12)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_PLUS,
        delta: (1, 5),
        primed: &[(1, 4), (9, 20), (3, 4), (19, 20)],
        double_primed: &[(1, 60), (11, 60), (31, 60), (41, 60)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_PLUS,
        delta: (2, 5),
        primed: &[(1, 20), (7, 20), (11, 20), (17, 20)],
        double_primed: &[(7, 60), (17, 60), (37, 60), (47, 60)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_PLUS,
        delta: (3, 5),
        primed: &[(3, 20), (9, 20), (13, 20), (19, 20)],
        double_primed: &[(13, 60), (23, 60), (43, 60), (53, 60)],
    },
    TwoFormRow {
        ks: K510,
        n: 60,
        rho: RHO5_PLUS,
        delta: (4, 5),
        primed: &[(1, 20), (1, 4), (11, 20), (3, 4)],
        double_primed: &[(19, 60), (29, 60), (49, 60), (59, 60)],
    },
    TwoFormRow {
        ks: K8,
        n: 24,
        rho: "1/2",
        delta: (0, 1),
        primed: &[(1, 12), (5, 12), (7, 12), (11, 12)],
        double_primed: &[(1, 8), (3, 8), (5, 8), (7, 8)],
    },
    TwoFormRow {
        ks: K8,
        n: 24,
        rho: "1/2",
        delta: (1, 4),
        primed: &[(1, 24), (5, 24), (13, 24), (17, 24)],
        double_primed: &[(1, 4), (1, 2), (3, 4)],
    },
    TwoFormRow {
        ks: K8,
        n: 24,
        rho: "1/2",
        delta: (1, 2),
        primed: &[(1, 6), (1, 3), (2, 3), (5, 6)],
        double_primed: &[(1, 8), (3, 8), (5, 8), (7, 8)],
    },
    TwoFormRow {
        ks: K8,
        n: 24,
        rho: "1/2",
        delta: (3, 4),
        primed: &[(7, 24), (11, 24), (19, 24), (23, 24)],
        double_primed: &[(1, 4), (1, 2), (3, 4)],
    },
];

/// `k = 4`, `δ = 0` eigenvalues that are fifth roots of unity, at blocks 1 and 3.
#[derive(Debug, Clone, Copy)]
pub struct FifthRootColumn {
    /// The column's `m/n`.
    pub mn: (u64, u64),
    pub rho: &'static str,
    /// `(λ⁺, λ⁻)` phases of block 1 in units of `π/5`.
    pub block1: (i32, i32),
    /// `(λ⁺, λ⁻)` phases of block 3 in units of `π/5`.
    pub block3: (i32, i32),
}

// The printed caption lists the last column as 4/6; the column header and the
// values belong to 4/5, which is what is stored here.
pub const TABLE6: &[FifthRootColumn] = &[
    FifthRootColumn { mn: (1, 5), rho: "(5+sqrt5)/8", block1: (-2, -3), block3: (3, 2) },
    FifthRootColumn { mn: (2, 5), rho: "(5-sqrt5)/8", block1: (-1, -4), block3: (4, 1) },
    FifthRootColumn { mn: (3, 5), rho: "(5-sqrt5)/8", block1: (-1, -4), block3: (4, 1) },
    FifthRootColumn { mn: (4, 5), rho: "(5+sqrt5)/8", block1: (-2, -3), block3: (3, 2) },
];
