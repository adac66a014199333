//! Closed-form structure constants for the Johnson and Nykamp-Zhao schemes.
//!
//! The tables below are written row-by-`j`: `table[k][j][i] = rho[k][i][j]`,
//! i.e. row `j` of the table for `R^(k)` lists the coefficients of every
//! `R^(i)` in the product `R^(k) R^(j)`.

use super::{SchemeKind, StructureConstants};

fn from_tables<const S: usize>(
    scheme: SchemeKind,
    n: usize,
    tables: [[[i64; S]; S]; S],
) -> StructureConstants {
    let mut out = StructureConstants::zeros(scheme.name(), n, S);
    for (k, table) in tables.iter().enumerate() {
        for (j, row) in table.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                assert!(v >= 0, "negative intersection number at N={n}");
                out.set(k, i, j, v as u64);
            }
        }
    }
    out
}

fn choose2(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// Johnson scheme J(N,2), relations `id`, `adj`, `disj`.
pub fn johnson(n: usize) -> StructureConstants {
    assert!(n >= SchemeKind::Johnson.min_vertices());
    let m = n as i64;
    let tables = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [2 * (m - 2), m - 2, 4], [0, m - 3, 2 * (m - 4)]],
        [
            [0, 0, 1],
            [0, m - 3, 2 * (m - 4)],
            [choose2(m - 2), choose2(m - 3), choose2(m - 4)],
        ],
    ];
    from_tables(SchemeKind::Johnson, n, tables)
}

/// Nykamp-Zhao configuration, relations `id`, `recip`, `div`, `chain`,
/// `anti`, `conv`, `disj`.
pub fn nykamp_zhao(n: usize) -> StructureConstants {
    assert!(n >= SchemeKind::NykampZhao.min_vertices());
    let m = n as i64;
    let (a, b, c) = (m - 2, m - 3, m - 4);
    let mut id = [[0; 7]; 7];
    for (k, row) in id.iter_mut().enumerate() {
        row[k] = 1;
    }
    let recip = [
        [0, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ];
    let div = [
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [a, 0, b, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1],
        [0, a, 0, 0, b, 0, 0],
        [0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, b, 0, b, c],
    ];
    let chain = [
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, a, 0, b, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 1],
        [a, 0, 0, 0, 0, b, 0],
        [0, 0, 1, 0, 0, 0, 1],
        [0, 0, b, 0, b, 0, c],
    ];
    let anti = [
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1],
        [a, 0, b, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 1],
        [0, a, 0, 0, b, 0, 0],
        [0, 0, 0, b, 0, b, c],
    ];
    let conv = [
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 1],
        [0, a, 0, b, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 1],
        [a, 0, 0, 0, 0, b, 0],
        [0, 0, b, 0, b, 0, c],
    ];
    let disj = [
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, b, b, c],
        [0, 0, 0, 0, b, b, c],
        [0, 0, b, b, 0, 0, c],
        [0, 0, b, b, 0, 0, c],
        [b * a, b * a, c * b, c * b, c * b, c * b, (m - 5) * c],
    ];
    from_tables(
        SchemeKind::NykampZhao,
        n,
        [id, recip, div, chain, anti, conv, disj],
    )
}

/// Gram matrix `G[k][l] = sum_{i,j} rho[k][i][j] rho[l][i][j]` of the
/// Nykamp-Zhao intersection matrices.
pub fn nykamp_zhao_gram(n: usize) -> [[i128; 7]; 7] {
    let m = n as i128;
    let lin_a = 3 * m - 10;
    let lin_b = m - 4;
    let quad = 7 * m * m - 40 * m + 66;
    let same = m * m - 8 * m + 18;
    let cross = 3 * m * m - 20 * m + 34;
    let sq = m * m - 8 * m + 16;
    let q0 = m * m - 9 * m + 20;
    let cubic = 3 * m * m * m - 33 * m * m + 126 * m - 166;
    let quartic = 7 * m.pow(4) - 94 * m.pow(3) + 499 * m * m - 1232 * m + 1186;
    [
        [7, 1, lin_a, lin_b, lin_b, lin_a, q0],
        [1, 7, lin_b, lin_a, lin_a, lin_b, q0],
        [lin_a, lin_b, quad, same, cross, sq, cubic],
        [lin_b, lin_a, same, quad, sq, cross, cubic],
        [lin_b, lin_a, cross, sq, quad, same, cubic],
        [lin_a, lin_b, sq, cross, same, quad, cubic],
        [q0, q0, cubic, cubic, cubic, cubic, quartic],
    ]
}
