//! Labelled entry layouts of the target (`rho`) and circuit-generated
//! (`sigma`) 16x16 density matrices.
//!
//! Each table lists, row by row, the label of the unique element sitting at
//! that position. A trailing `*` marks the complex conjugate of the labelled
//! element. Any density matrix of the corresponding family must carry equal
//! values wherever the labels agree.

use num_complex::Complex64;

use crate::qcore::{DenseMatrix, FULL_DIM};

/// Layout of the ideal TFD density matrix: real symmetric, 15 unique labels.
pub const RHO_LAYOUT: &str = "\
00  01  01  03  01  05  06  01  01  06  05  01  03  01  01  00\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
03  13  13  33  13  35  36  13  13  36  35  13  33  13  13  03\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
05  15  15  35  15  55  56  15  15  56  55  15  35  15  15  05\n\
06  16  16  36  16  56  66  16  16  66  56  16  36  16  16  06\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
06  16  16  36  16  56  66  16  16  66  56  16  36  16  16  06\n\
05  15  15  35  15  55  56  15  15  56  55  15  35  15  15  05\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
03  13  13  33  13  35  36  13  13  36  35  13  33  13  13  03\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
01  11  11  13  11  15  16  11  11  16  15  11  13  11  11  01\n\
00  01  01  03  01  05  06  01  01  06  05  01  03  01  01  00\n\
";

/// Layout of a density matrix produced by the single-step circuit: Hermitian, 15 unique labels.
pub const SIGMA_LAYOUT: &str = "\
00  01  01  03  01  05  06  01  01  06  05  01  03  01  01  00\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
03* 13* 13* 33  13* 35  36  13* 13* 36  35  13* 33  13* 13* 03*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
05* 15* 15* 35* 15* 55  56  15* 15* 56  55  15* 35* 15* 15* 05*\n\
06* 16* 16* 36* 16* 56* 66  16* 16* 66  56* 16* 36* 16* 16* 06*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
06* 16* 16* 36* 16* 56* 66  16* 16* 66  56* 16* 36* 16* 16* 06*\n\
05* 15* 15* 35* 15* 55  56  15* 15* 56  55  15* 35* 15* 15* 05*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
03* 13* 13* 33  13* 35  36  13* 13* 36  35  13* 33  13* 13* 03*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
01* 11  11  13  11  15  16  11  11  16  15  11  13  11  11  01*\n\
00  01  01  03  01  05  06  01  01  06  05  01  03  01  01  00\n\
";

/// One cell of a layout table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutCell {
    /// Two-digit label such as `05`, read as the representative entry `(0, 5)`.
    pub label: (u8, u8),
    pub conjugated: bool,
}

/// A parsed 16x16 layout table.
#[derive(Debug, Clone)]
pub struct DensityLayout {
    cells: Vec<LayoutCell>,
}

impl DensityLayout {
    pub fn parse(table: &str) -> Self {
        let cells: Vec<LayoutCell> = table
            .lines()
            .flat_map(str::split_whitespace)
            .map(|token| {
                let conjugated = token.ends_with('*');
                let digits = token.trim_end_matches('*').as_bytes();
                assert_eq!(digits.len(), 2, "malformed layout label {token:?}");
                LayoutCell {
                    label: (digits[0] - b'0', digits[1] - b'0'),
                    conjugated,
                }
            })
            .collect();
        assert_eq!(cells.len(), FULL_DIM * FULL_DIM, "layout must have 256 cells");
        Self { cells }
    }

    pub fn rho() -> Self {
        Self::parse(RHO_LAYOUT)
    }

    pub fn sigma() -> Self {
        Self::parse(SIGMA_LAYOUT)
    }

    pub fn cell(&self, row: usize, col: usize) -> LayoutCell {
        self.cells[row * FULL_DIM + col]
    }

    /// Distinct labels in order of first appearance.
    pub fn labels(&self) -> Vec<(u8, u8)> {
        let mut seen = Vec::new();
        for c in &self.cells {
            if !seen.contains(&c.label) {
                seen.push(c.label);
            }
        }
        seen
    }

    /// Largest deviation between a matrix entry and the value carried by the
    /// representative entry of its label (conjugated where marked).
    pub fn max_violation(&self, m: &DenseMatrix) -> f64 {
        assert_eq!(m.dim(), FULL_DIM, "layouts describe 16x16 matrices");
        let mut worst = 0.0_f64;
        for row in 0..FULL_DIM {
            for col in 0..FULL_DIM {
                let cell = self.cell(row, col);
                let reference: Complex64 = m[(cell.label.0 as usize, cell.label.1 as usize)];
                let expected = if cell.conjugated { reference.conj() } else { reference };
                worst = worst.max((m[(row, col)] - expected).norm());
            }
        }
        worst
    }
}
