//! Dense matrices of polynomials.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{same_ring, Poly, Ring};

/// A `rows × cols` matrix stored row-major. Empty shapes (a zero row or
/// column count) are allowed so that block layouts with vanishing blocks
/// compose without special cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ring: ring.clone(), rows, cols, entries: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> PolyMatrix {
        PolyMatrix::scalar(&Poly::one(ring), n)
    }

    /// `g·E_n`.
    pub fn scalar(g: &Poly, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(g.ring(), n, n);
        for i in 0..n {
            m.set(i, i, g.clone());
        }
        m
    }

    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for p in row {
                if !same_ring(p.ring(), ring) {
                    return Err(Error::RingMismatch);
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, entries })
    }

    pub fn row_vector(ring: &Arc<Ring>, row: Vec<Poly>) -> Result<PolyMatrix> {
        PolyMatrix::from_rows(ring, vec![row])
    }

    pub fn column_vector(ring: &Arc<Ring>, col: Vec<Poly>) -> Result<PolyMatrix> {
        PolyMatrix::from_rows(ring, col.into_iter().map(|p| vec![p]).collect())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Poly) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p * c).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// Copies `rows × cols` entries starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of bounds");
        let mut out = PolyMatrix::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Assembles a block matrix. Every block in a block row must have the
    /// same height and every block in a block column the same width.
    pub fn block_assemble(ring: &Arc<Ring>, grid: &[Vec<PolyMatrix>]) -> Result<PolyMatrix> {
        let Some(first) = grid.first() else {
            return Ok(PolyMatrix::zeros(ring, 0, 0));
        };
        let widths: Vec<usize> = first.iter().map(PolyMatrix::cols).collect();
        let total_cols: usize = widths.iter().sum();
        let mut heights = Vec::with_capacity(grid.len());
        for (bi, brow) in grid.iter().enumerate() {
            if brow.len() != widths.len() {
                return Err(Error::Dimension(format!(
                    "block row {bi} has {} blocks, expected {}",
                    brow.len(),
                    widths.len()
                )));
            }
            let h = brow.first().map_or(0, PolyMatrix::rows);
            for (bj, block) in brow.iter().enumerate() {
                if !same_ring(block.ring(), ring) {
                    return Err(Error::RingMismatch);
                }
                if block.rows() != h || block.cols() != widths[bj] {
                    return Err(Error::Dimension(format!(
                        "block ({bi}, {bj}) is {}x{}, expected {h}x{}",
                        block.rows(),
                        block.cols(),
                        widths[bj]
                    )));
                }
            }
            heights.push(h);
        }
        let mut out = PolyMatrix::zeros(ring, heights.iter().sum(), total_cols);
        let mut r0 = 0;
        for (brow, h) in grid.iter().zip(&heights) {
            let mut c0 = 0;
            for block in brow {
                for i in 0..*h {
                    for j in 0..block.cols() {
                        out.set(r0 + i, c0 + j, block.get(i, j).clone());
                    }
                }
                c0 += block.cols();
            }
            r0 += h;
        }
        Ok(out)
    }
}

impl fmt::Display for PolyMatrix {
    /// One bracketed row per line with right-aligned columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        let mut widths = vec![0; self.cols];
        for (k, c) in cells.iter().enumerate() {
            widths[k % self.cols.max(1)] = widths[k % self.cols.max(1)].max(c.chars().count());
        }
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>w$}", cells[i * self.cols + j], w = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
